"""2x2 transfer matrices of directional couplers and symmetric MZIs."""

import numpy as np

from ..errors import DimensionError, ParameterError

UNITARITY_ATOL = 1e-10


def check_unitary(m, atol=UNITARITY_ATOL):
    """Return ``m`` as a complex array after verifying ``max|m^† m - I| <= atol``.

    Raises
    ------
    DimensionError
        If ``m`` is not square.
    ParameterError
        If the unitarity residual exceeds ``atol``.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionError(f"unitary must be square, got shape {m.shape}")
    residual = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
    if residual > atol:
        raise ParameterError(f"matrix is not unitary: max|U^dag U - I| = {residual:.3e}")
    return m


def dc_transfer(alpha_err=0.0):
    """Directional coupler with splitting angle ``pi/4 + alpha_err``.

    ``alpha_err = 0`` is a balanced 50:50 coupler; the power coupled into the
    other waveguide is ``sin^2(pi/4 + alpha_err)``.
    """
    if not abs(alpha_err) <= np.pi / 4:
        raise ParameterError(f"|alpha_err| must not exceed pi/4, got {alpha_err}")
    c = np.cos(np.pi / 4 + alpha_err)
    s = np.sin(np.pi / 4 + alpha_err)
    return np.array([[c, 1j * s], [1j * s, c]], dtype=np.complex128)


def mzi_transfer(theta1, theta2, alpha_err=0.0, beta_err=0.0):
    """Transfer matrix of a symmetric MZI.

    Light meets the first coupler (error ``alpha_err``), the arm phases
    ``theta1`` (upper) and ``theta2`` (lower), then the second coupler
    (error ``beta_err``)::

        T = DC(beta) @ diag(e^{i theta1}, e^{i theta2}) @ DC(alpha)

    With ideal couplers this is ``i e^{i S} [[sin d, cos d], [cos d, -sin d]]``
    with ``S = (theta1 + theta2)/2`` and ``d = (theta1 - theta2)/2``.
    """
    arms = np.diag([np.exp(1j * theta1), np.exp(1j * theta2)])
    return dc_transfer(beta_err) @ arms @ dc_transfer(alpha_err)


def ideal_mzi(sigma, delta):
    """Closed form of the error-free MZI in terms of MZI phase and internal phase."""
    s, c = np.sin(delta), np.cos(delta)
    return 1j * np.exp(1j * sigma) * np.array([[s, c], [c, -s]], dtype=np.complex128)


def arm_phases(sigma, delta):
    """Arm phases ``(theta1, theta2)`` realising MZI phase ``sigma`` and internal phase ``delta``."""
    return sigma + delta, sigma - delta
