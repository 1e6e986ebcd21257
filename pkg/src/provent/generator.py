"""Deterministic synthetic event source with signal + pileup structure.

Each event carries Poisson(pileup_mean) soft charged pions whose transverse
momentum follows an exponential with scale pt_soft, plus n_signal hard
particles with pT uniform in [pt_hard_min, pt_hard_max]. Pseudorapidity is
uniform in [-2.5, 2.5] for both populations; pz = pT*sinh(eta). Events are
a pure function of the config: the draw order per event is fixed (soft
block first, then hard block; per particle pT, phi, eta, then the charge
sign for soft pions), so one seed always produces one byte stream.

process_id labels the ground truth: 1 when the config puts signal in the
event, 0 for pure-pileup batches, which is what selection tests key on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

from .errors import InvariantViolation
from .model import NO_LINK, EventRecord, ParticleBlock
from .quant import QuantizationScheme, quantize
from .rng import Xoshiro256StarStar

PION_PDG = 211
PION_MASS = 0.13957      # GeV
SIGNAL_PDG = 25
SIGNAL_MASS = 125.0      # GeV
ETA_RANGE = 2.5
TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class SpectrumConfig:
    n_events: int = 100
    pileup_mean: float = 100.0
    pt_soft: float = 0.5           # GeV, exponential scale
    n_signal: int = 2
    pt_hard_min: float = 50.0      # GeV
    pt_hard_max: float = 150.0     # GeV
    seed: int = 1

    def validate(self) -> "SpectrumConfig":
        if self.n_events < 0:
            raise InvariantViolation(f"n_events must be >= 0, got {self.n_events}")
        if self.pileup_mean < 0:
            raise InvariantViolation(f"pileup_mean must be >= 0, got {self.pileup_mean}")
        if self.pt_soft <= 0:
            raise InvariantViolation(f"pt_soft must be positive, got {self.pt_soft}")
        if self.n_signal < 0:
            raise InvariantViolation(f"n_signal must be >= 0, got {self.n_signal}")
        if self.pt_hard_min <= 0 or self.pt_hard_max < self.pt_hard_min:
            raise InvariantViolation(
                f"hard pT range [{self.pt_hard_min}, {self.pt_hard_max}] is not positive-ascending")
        return self


def _add_particle(block: ParticleBlock, pdg: int, pt: float, phi: float, eta: float,
                  mass: float, unit: int) -> None:
    block.pdg_id.append(pdg)
    block.status.append(1)
    block.px.append(quantize(pt * math.cos(phi), unit))
    block.py.append(quantize(pt * math.sin(phi), unit))
    block.pz.append(quantize(pt * math.sinh(eta), unit))
    block.mass.append(quantize(mass, unit))
    block.mother1.append(NO_LINK)
    block.mother2.append(NO_LINK)
    block.daughter1.append(NO_LINK)
    block.daughter2.append(NO_LINK)


def generate_events(cfg: SpectrumConfig,
                    scheme: QuantizationScheme | None = None) -> Iterator[EventRecord]:
    cfg.validate()
    if scheme is None:
        scheme = QuantizationScheme()
    unit = scheme.momentum_unit
    rng = Xoshiro256StarStar(cfg.seed)
    for number in range(cfg.n_events):
        block = ParticleBlock()
        n_soft = rng.poisson(cfg.pileup_mean)
        for _ in range(n_soft):
            pt = rng.exponential(cfg.pt_soft)
            phi = rng.uniform(0.0, TWO_PI)
            eta = rng.uniform(-ETA_RANGE, ETA_RANGE)
            charge = rng.sign()
            _add_particle(block, charge * PION_PDG, pt, phi, eta, PION_MASS, unit)
        for _ in range(cfg.n_signal):
            pt = rng.uniform(cfg.pt_hard_min, cfg.pt_hard_max)
            phi = rng.uniform(0.0, TWO_PI)
            eta = rng.uniform(-ETA_RANGE, ETA_RANGE)
            _add_particle(block, SIGNAL_PDG, pt, phi, eta, SIGNAL_MASS, unit)
        yield EventRecord(
            event_number=number,
            process_id=1 if cfg.n_signal > 0 else 0,
            weight=1.0,
            particles=block,
        )
