# Standard imports
import argparse
import logging
import sys

# Third-party imports
from dotenv import load_dotenv

from app.util.safe_config_parsing import ConfigError
from app.workflow.RunConfig import load_config, load_defaults
from app.workflow.RunWorkflow import lemma_reports, resolve_output_dir, run, sweep, write_lemma_report

logger = logging.getLogger("dgshock")

SWEEP_DEFAULTS = load_defaults()["sweep"]

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def _int_list(text: str):
    return [int(part) for part in text.split(",") if part.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dgshock", description="Space-time DG solver for scalar conservation laws")
    parser.add_argument("--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="solve one configuration and write its artifacts")
    run_parser.add_argument("config", help="flat key = value configuration file")
    run_parser.add_argument("--out", default=None, help="output directory (overrides DGSHOCK_OUT)")

    sweep_parser = commands.add_parser("sweep", help="h-refinement series of one configuration")
    sweep_parser.add_argument("config")
    sweep_parser.add_argument("--refine", type=int, default=SWEEP_DEFAULTS["refine"], help="number of levels, each halving h")
    sweep_parser.add_argument("--jobs", type=int, default=SWEEP_DEFAULTS["jobs"], help="levels solved concurrently")
    sweep_parser.add_argument("--out", default=None)

    lemma_parser = commands.add_parser("verify-lemma", help="check the discrete coercivity bound")
    lemma_parser.add_argument("--p", type=_int_list, default=[1, 2, 3], help="degrees, comma separated")
    lemma_parser.add_argument("--q", type=_int_list, default=[2, 4, 6, 8], help="even exponents, comma separated")
    lemma_parser.add_argument("--trials", type=int, default=1000)
    lemma_parser.add_argument("--seed", type=int, default=0)
    lemma_parser.add_argument("--dim", type=int, choices=[1, 2], default=1)
    lemma_parser.add_argument("--map", default=None, help="diagonal element map as t_scale,x_scale")
    lemma_parser.add_argument("--out", default=None)
    return parser


def main(argv=None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level), format=LOG_FORMAT)

    try:
        if args.command == "verify-lemma":
            reports = lemma_reports(args.p, args.q, args.trials, args.seed, args.dim, args.map)
            if args.out:
                write_lemma_report(args.out, reports)
            return 0 if all(case.holds_q for report in reports for case in report.cases.values()) else 1

        config = load_config(args.config)
        if args.command == "run":
            state = run(config, args.out)
            logger.info("run %s: %s", "failed" if state["errors"] else "finished", state["output_dir"] or resolve_output_dir(config, args.out))
            return 1 if state["errors"] else 0

        result = sweep(config, args.refine, args.jobs, args.out)
        for error in result.errors:
            logger.error("%s", error)
        return 1 if result.errors else 0
    except (ConfigError, ValueError, OSError) as error:
        logger.error("%s", error)
        return 2


if __name__ == "__main__":
    sys.exit(main())
