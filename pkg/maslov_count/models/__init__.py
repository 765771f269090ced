"""Data models for frames, paths, counts and run configs.

Data models:
- LagrangianFrame, UnitaryMatrix: frames [X; Y] and the unitary W~ built from a pair
- ModeSet, AsymptoticFrames: stable/unstable subspaces of the limiting matrices
- EvolvedFramePath, FramePairPath, RotationTrace: sampled paths and tracked eigenvalue angles
- MaslovResult, MaslovBox, BoxResult: Maslov indices of single paths and of the box
- CountResult, KernelSum, HormanderData: eigenvalue counts and target exchanges
- NumericsConfig: resolved tolerances for one run
- RunConfig, RunResult: JSON config and result documents for the command line

Result documents are pydantic models; numeric intermediates holding arrays
are frozen dataclasses.
"""

from maslov_count.models.asymptotics import AsymptoticFrames, ModeSet
from maslov_count.models.counting import CountResult, HormanderData, KernelSum
from maslov_count.models.evolution import EvolvedFramePath
from maslov_count.models.frames import LagrangianFrame, UnitaryMatrix, standard_symplectic
from maslov_count.models.maslov import BoxResult, FramePairPath, MaslovBox, MaslovResult, RotationTrace
from maslov_count.models.numerics import NumericsConfig
from maslov_count.models.spectral import EssentialSpectrumData, SpectralInterval, TruncationPolicy

__all__ = [
    "AsymptoticFrames",
    "BoxResult",
    "CountResult",
    "EssentialSpectrumData",
    "EvolvedFramePath",
    "FramePairPath",
    "HormanderData",
    "KernelSum",
    "LagrangianFrame",
    "MaslovBox",
    "MaslovResult",
    "ModeSet",
    "NumericsConfig",
    "RotationTrace",
    "SpectralInterval",
    "TruncationPolicy",
    "UnitaryMatrix",
    "standard_symplectic",
]
