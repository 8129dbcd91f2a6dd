"""Molecule specification and geometry handling (Angstrom in, Bohr out)."""

from dataclasses import dataclass, field

import numpy as np

from .basis import ATOMIC_NUMBERS
from .integrals import ANGSTROM_TO_BOHR


@dataclass
class MoleculeSpec:
    geometry: str  # "El x y z; El x y z" in Angstrom
    basis: str
    charge: int = 0
    multiplicity: int = 1
    label: str = ""
    elements: list = field(init=False)
    coords_bohr: list = field(init=False)

    def __post_init__(self):
        self.elements = []
        self.coords_bohr = []
        for token in self.geometry.split(";"):
            parts = token.split()
            if not parts:
                continue
            if len(parts) != 4:
                raise ValueError(f"bad geometry fragment {token!r}")
            element = parts[0].capitalize()
            if element not in ATOMIC_NUMBERS:
                raise ValueError(f"unknown element {element!r}")
            self.elements.append(element)
            self.coords_bohr.append(
                np.array([float(x) for x in parts[1:]]) * ANGSTROM_TO_BOHR
            )
        if not self.elements:
            raise ValueError("empty geometry")
        if self.multiplicity != 1:
            raise ValueError("only closed-shell (singlet) systems are supported")

    @property
    def n_electrons(self):
        return sum(ATOMIC_NUMBERS[el] for el in self.elements) - self.charge

    @property
    def n_alpha(self):
        n = self.n_electrons
        if n % 2:
            raise ValueError("odd electron count in a closed-shell exporter")
        return n // 2

    n_beta = n_alpha
