"""Two-qubit dynamics under local PT-symmetric and non-Hermitian operations.

Submodules
----------
matrixcore
    Small dense complex linear algebra (tensor products, partial traces, eigenvalues).
dynamics
    Hamiltonians, closed-form propagators, master equations and RK4 integration.
metrics
    Concurrence, maximal CHSH value, steering parameter, purity.
scenarios
    Figure presets, metric sampling and the entanglement-increase report.
io, cli
    Config/state/CSV files and the ``ptentangle`` command.
"""
from .kernels import BACKEND

__version__ = "0.1.0"
__all__ = ["BACKEND"]
