"""Orthogonal polynomial bases, quadrature and FR correction machinery.

Everything lives on the reference interval [-1/2, +1/2] or the reference
cell [-1/2, 1/2]^2. The 1-D basis phi_j is the monic (shifted, rescaled)
Legendre family; its values, derivatives and L2 norms are exact rationals,
kept as hard-coded tables so no runtime symbolic work is needed.
"""

from __future__ import annotations

import numpy as np

MAX_DEGREE = 5

# Monomial coefficients of phi_j on [-1/2, 1/2], low degree first.
# phi_0 = 1, phi_1 = x, phi_2 = x^2 - 1/12, phi_3 = x^3 - (3/20) x,
# phi_4 = x^4 - (3/14) x^2 + 3/560, phi_5 = x^5 - (5/18) x^3 + (5/336) x.
_PHI_COEFFS = (
    (1.0,),
    (0.0, 1.0),
    (-1.0 / 12.0, 0.0, 1.0),
    (0.0, -3.0 / 20.0, 0.0, 1.0),
    (3.0 / 560.0, 0.0, -3.0 / 14.0, 0.0, 1.0),
    (0.0, 5.0 / 336.0, 0.0, -5.0 / 18.0, 0.0, 1.0),
)

# integral of phi_j^2 over the reference interval
PHI_NORM2 = (1.0, 1.0 / 12.0, 1.0 / 180.0, 1.0 / 2800.0, 1.0 / 44100.0, 1.0 / 698544.0)

# Gauss-Legendre rules on [-1/2, 1/2], generated from a 50-digit computation
# and rounded to double precision. Node count n integrates degree <= 2n-1
# exactly; weights sum to 1.
_GL_TABLE = {
    1: (
        (0.0,),
        (1.0,),
    ),
    2: (
        (-0.2886751345948128823, 0.2886751345948128823),
        (0.5, 0.5),
    ),
    3: (
        (-0.3872983346207416885, 0.0, 0.3872983346207416885),
        (0.2777777777777777778, 0.4444444444444444444, 0.2777777777777777778),
    ),
    4: (
        (-0.4305681557970262876, -0.1699905217924281324,
         0.1699905217924281324, 0.4305681557970262876),
        (0.1739274225687269287, 0.3260725774312730713,
         0.3260725774312730713, 0.1739274225687269287),
    ),
    5: (
        (-0.4530899229693319964, -0.2692346550528415455, 0.0,
         0.2692346550528415455, 0.4530899229693319964),
        (0.1184634425280945438, 0.2393143352496832340, 0.2844444444444444444,
         0.2393143352496832340, 0.1184634425280945438),
    ),
    6: (
        (-0.4662347571015760139, -0.3306046932331322568, -0.1193095930415984543,
         0.1193095930415984543, 0.3306046932331322568, 0.4662347571015760139),
        (0.08566224618958517252, 0.1803807865240693038, 0.2339569672863455237,
         0.2339569672863455237, 0.1803807865240693038, 0.08566224618958517252),
    ),
    7: (
        (-0.4745539561713792623, -0.3707655927996972199, -0.2029225756886985835,
         0.0, 0.2029225756886985835, 0.3707655927996972199, 0.4745539561713792623),
        (0.06474248308443484664, 0.1398526957446383340, 0.1909150252525594725,
         0.2089795918367346939, 0.1909150252525594725, 0.1398526957446383340,
         0.06474248308443484664),
    ),
    8: (
        (-0.4801449282487681158, -0.3983332387068133698, -0.2627662049581644929,
         -0.09171732124782490247, 0.09171732124782490247, 0.2627662049581644929,
         0.3983332387068133698, 0.4801449282487681158),
        (0.05061426814518812958, 0.1111905172266872353, 0.1568533229389436437,
         0.1813418916891809915, 0.1813418916891809915, 0.1568533229389436437,
         0.1111905172266872353, 0.05061426814518812958),
    ),
    9: (
        (-0.4840801197538130449, -0.4180155536633178971, -0.3066857163502951987,
         -0.1621267117019044645, 0.0, 0.1621267117019044645, 0.3066857163502951987,
         0.4180155536633178971, 0.4840801197538130449),
        (0.04063719418078720599, 0.09032408034742870203, 0.1303053482014677312,
         0.1561735385200014200, 0.1651196775006298816, 0.1561735385200014200,
         0.1303053482014677312, 0.09032408034742870203, 0.04063719418078720599),
    ),
    10: (
        (-0.4869532642585858600, -0.4325316833444922554, -0.3397047841495122031,
         -0.2166976970646235954, -0.07443716949081560544, 0.07443716949081560544,
         0.2166976970646235954, 0.3397047841495122031, 0.4325316833444922554,
         0.4869532642585858600),
        (0.03333567215434406880, 0.07472567457529029657, 0.1095431812579910220,
         0.1346333596549981775, 0.1477621123573764351, 0.1477621123573764351,
         0.1346333596549981775, 0.1095431812579910220, 0.07472567457529029657,
         0.03333567215434406880),
    ),
}

# Legendre polynomials on [-1, 1] in the monomial basis, used only to build
# the Radau correction functions.
_LEGENDRE_COEFFS = (
    (1.0,),
    (0.0, 1.0),
    (-0.5, 0.0, 1.5),
    (0.0, -1.5, 0.0, 2.5),
    (0.375, 0.0, -3.75, 0.0, 4.375),
    (0.0, 1.875, 0.0, -8.75, 0.0, 7.875),
)


def _polyval(coeffs, x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    for c in reversed(coeffs):
        out = out * x + c
    return out


def _polyder(coeffs):
    return tuple(i * c for i, c in enumerate(coeffs))[1:] or (0.0,)


def phi(j: int, x) -> np.ndarray:
    """Value of the orthogonal basis polynomial phi_j at x."""
    if not 0 <= j <= MAX_DEGREE:
        raise ValueError(f"unsupported degree {j}")
    return _polyval(_PHI_COEFFS[j], x)


def phi_deriv(j: int, x) -> np.ndarray:
    """Derivative phi_j'(x)."""
    if not 0 <= j <= MAX_DEGREE:
        raise ValueError(f"unsupported degree {j}")
    return _polyval(_polyder(_PHI_COEFFS[j]), x)


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the n-point Gauss-Legendre rule on [-1/2, 1/2]."""
    if n not in _GL_TABLE:
        raise ValueError(f"GL rule with {n} points not tabulated (1..10)")
    nodes, weights = _GL_TABLE[n]
    return np.array(nodes), np.array(weights)


def radau_coeffs(k: int) -> tuple[np.ndarray, np.ndarray]:
    """Monomial coefficients (low first) of the FR correction functions.

    g_l(x) = ((-1)^k / 2) [L_k(2x) - L_{k+1}(2x)] and
    g_r(x) = (1/2) [L_k(2x) + L_{k+1}(2x)], degree k+1 each, satisfying
    g_l(-1/2) = g_r(+1/2) = 1 and g_l(+1/2) = g_r(-1/2) = 0.
    """
    if not 0 <= k <= MAX_DEGREE - 1:
        raise ValueError(f"unsupported degree {k}")
    lk = np.zeros(k + 2)
    lk1 = np.zeros(k + 2)
    # compose with the 2x argument scaling: coefficient of x^i picks up 2^i
    for i, c in enumerate(_LEGENDRE_COEFFS[k]):
        lk[i] = c * 2.0**i
    for i, c in enumerate(_LEGENDRE_COEFFS[k + 1]):
        lk1[i] = c * 2.0**i
    gl = 0.5 * (-1.0) ** k * (lk - lk1)
    gr = 0.5 * (lk + lk1)
    return gl, gr


def radau(k: int, side: str, x) -> tuple[np.ndarray, np.ndarray]:
    """(value, derivative) of the left or right correction function at x."""
    gl, gr = radau_coeffs(k)
    c = {"left": gl, "right": gr}[side]
    return _polyval(c, x), _polyval(_polyder(tuple(c)), x)


def lagrange_matrix(nodes: np.ndarray, x: np.ndarray) -> np.ndarray:
    """L[p, j] = ell_j(x_p) for the Lagrange basis on the given nodes."""
    nodes = np.asarray(nodes, float)
    x = np.atleast_1d(np.asarray(x, float))
    n = len(nodes)
    if len(np.unique(nodes)) != n:
        raise ValueError("duplicate interpolation nodes")
    out = np.empty((len(x), n))
    for j in range(n):
        num = np.ones_like(x)
        den = 1.0
        for i in range(n):
            if i != j:
                num *= x - nodes[i]
                den *= nodes[j] - nodes[i]
        out[:, j] = num / den
    return out


def lagrange_deriv_matrix(nodes: np.ndarray, x: np.ndarray) -> np.ndarray:
    """L[p, j] = ell_j'(x_p)."""
    nodes = np.asarray(nodes, float)
    x = np.atleast_1d(np.asarray(x, float))
    n = len(nodes)
    out = np.zeros((len(x), n))
    for j in range(n):
        den = 1.0
        for i in range(n):
            if i != j:
                den *= nodes[j] - nodes[i]
        # sum over the dropped factor of the product rule
        for m in range(n):
            if m == j:
                continue
            term = np.ones_like(x)
            for i in range(n):
                if i != j and i != m:
                    term *= x - nodes[i]
            out[:, j] += term / den
    return out


def n_modes(k: int) -> int:
    """Dimension of P_k in two variables."""
    return (k + 1) * (k + 2) // 2


def mode_indices(k: int) -> list[tuple[int, int]]:
    """(xi-degree, eta-degree) pairs of the 2-D basis, graded ordering.

    Within degree d the xi-degree decreases: (d,0), (d-1,1), ..., (0,d),
    so the first six modes are 1, phi1(xi), phi1(eta), phi2(xi),
    phi1(xi)phi1(eta), phi2(eta).
    """
    out = []
    for d in range(k + 1):
        for n in range(d + 1):
            out.append((d - n, n))
    return out


def basis2d_matrix(indices, xi, eta) -> np.ndarray:
    """B[p, i] = phi_m(xi_p) phi_n(eta_p) for (m, n) in indices."""
    xi = np.atleast_1d(np.asarray(xi, float))
    eta = np.atleast_1d(np.asarray(eta, float))
    out = np.empty((len(xi), len(indices)))
    for col, (m, n) in enumerate(indices):
        out[:, col] = phi(m, xi) * phi(n, eta)
    return out


def basis2d_deriv_matrices(indices, xi, eta) -> tuple[np.ndarray, np.ndarray]:
    """Matrices of d/dxi and d/deta of the 2-D basis at the given points."""
    xi = np.atleast_1d(np.asarray(xi, float))
    eta = np.atleast_1d(np.asarray(eta, float))
    dxi = np.empty((len(xi), len(indices)))
    deta = np.empty((len(xi), len(indices)))
    for col, (m, n) in enumerate(indices):
        dxi[:, col] = phi_deriv(m, xi) * phi(n, eta)
        deta[:, col] = phi(m, xi) * phi_deriv(n, eta)
    return dxi, deta


def norms2d(indices) -> np.ndarray:
    """L2 norms squared of the 2-D basis functions over the reference cell."""
    return np.array([PHI_NORM2[m] * PHI_NORM2[n] for m, n in indices])


def vandermonde(k: int) -> tuple[np.ndarray, np.ndarray]:
    """V[i, j] = phi_j(eta_i) at the k+1 GL nodes, together with V^{-1}."""
    nodes, _ = gauss_legendre(k + 1)
    v = np.empty((k + 1, k + 1))
    for j in range(k + 1):
        v[:, j] = phi(j, nodes)
    vinv = np.linalg.inv(v)
    return v, vinv
