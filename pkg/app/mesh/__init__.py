from app.mesh.SpaceTimeMesh import (
    BOUNDARY,
    INITIAL,
    TERMINAL,
    Face,
    FaceKind,
    FaceView,
    SpaceTimeMesh,
    build_mesh,
    faces_of,
)

__all__ = [
    "BOUNDARY",
    "INITIAL",
    "TERMINAL",
    "Face",
    "FaceKind",
    "FaceView",
    "SpaceTimeMesh",
    "build_mesh",
    "faces_of",
]
