"""Gaussian basis set data for the systems this exporter generates.

Exponents and contraction coefficients are the published values for
STO-3G (H), 6-31G (H, O) and cc-pVDZ (N); coefficients refer to normalized
primitives.  Shells with two contraction columns (shared exponents) are
stored as separate entries.
"""

# element -> list of (angular momentum, [exponents], [coefficients])
BASIS_SETS = {
    "sto-3g": {
        "H": [
            (0, [3.42525091, 0.62391373, 0.16885540],
                [0.15432897, 0.53532814, 0.44463454]),
        ],
    },
    "6-31g": {
        "H": [
            (0, [18.7311370, 2.8253937, 0.6401217],
                [0.03349460, 0.23472695, 0.81375733]),
            (0, [0.1612778], [1.0]),
        ],
        "O": [
            (0, [5484.6717, 825.23495, 188.04696, 52.964500, 16.897570, 5.7996353],
                [0.0018311, 0.0139501, 0.0684451, 0.2327143, 0.4701930, 0.3585209]),
            (0, [15.539616, 3.5999336, 1.0137618],
                [-0.1107775, -0.1480263, 1.1307670]),
            (0, [0.2700058], [1.0]),
            (1, [15.539616, 3.5999336, 1.0137618],
                [0.0708743, 0.3397528, 0.7271586]),
            (1, [0.2700058], [1.0]),
        ],
    },
    "cc-pvdz": {
        "N": [
            (0, [9046.0, 1357.0, 309.3, 87.73, 28.56, 10.21, 3.838, 0.7466],
                [0.000700, 0.005389, 0.027406, 0.103207, 0.278723, 0.448540,
                 0.278238, 0.015440]),
            (0, [9046.0, 1357.0, 309.3, 87.73, 28.56, 10.21, 3.838, 0.7466],
                [-0.000153, -0.001208, -0.005992, -0.024544, -0.067459, -0.158078,
                 -0.121831, 0.549003]),
            (0, [0.2248], [1.0]),
            (1, [13.55, 2.917, 0.7973],
                [0.039919, 0.217169, 0.510319]),
            (1, [0.2185], [1.0]),
            (2, [0.817], [1.0]),
        ],
    },
}

ATOMIC_NUMBERS = {"H": 1, "C": 6, "N": 7, "O": 8}

# spherically averaged ground-configuration occupations per spatial orbital,
# in aufbau (orbital-energy) order; used for the atomic-density initial guess
SAD_OCCUPATIONS = {
    "H": [1.0],
    "N": [2.0, 2.0, 1.0, 1.0, 1.0],
    "O": [2.0, 2.0, 4.0 / 3.0, 4.0 / 3.0, 4.0 / 3.0],
}


def shells_for(element, basis_name):
    basis = BASIS_SETS.get(basis_name.lower())
    if basis is None:
        raise KeyError(f"basis set {basis_name!r} not tabulated")
    if element not in basis:
        raise KeyError(f"element {element!r} missing from basis {basis_name!r}")
    return basis[element]
