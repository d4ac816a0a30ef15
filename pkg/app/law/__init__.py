from app.law.ConservationLaw import ConservationLaw, law_from_name, space_time_flux
from app.law.EntropyPair import EntropyFunction, EntropyPair, entropy_flux_build, power_entropy
from app.law.ProblemData import ProblemData, bln_violation

__all__ = [
    "ConservationLaw",
    "law_from_name",
    "space_time_flux",
    "EntropyFunction",
    "EntropyPair",
    "entropy_flux_build",
    "power_entropy",
    "ProblemData",
    "bln_violation",
]
