"""Regenerate the fixtures/ state files.  Everything is seeded, so the
output is byte-identical across runs; CI relies on that."""

import pathlib

import numpy as np

from discordium.cli import save_state
from discordium.qmat import (
    bell_state,
    classical_state,
    ginibre_density,
    ginibre_state,
    product_state,
    werner,
)

OUT = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def main() -> None:
    OUT.mkdir(exist_ok=True)
    save_state(bell_state(), OUT / "bell.json", label="bell")
    for p in (0.0, 0.25, 0.5, 0.75, 1.0):
        name = f"werner_p{int(round(p * 100)):03d}"
        save_state(werner(p), OUT / f"{name}.json", label=name)
    diag = classical_state(
        [0.5, 0.5],
        [np.diag([1.0, 0.0]), np.diag([0.0, 1.0])],
    )
    save_state(diag, OUT / "classical.json", label="classical")
    rng = np.random.default_rng(42)
    prod = product_state(ginibre_density(2, 2, rng), ginibre_density(2, 2, rng))
    save_state(prod, OUT / "product.json", label="product")
    for k in range(10):
        save_state(
            ginibre_state(2, 2, 2, seed=1000 + k),
            OUT / f"rank2_{k:02d}.json",
            label=f"rank2_{k:02d}",
        )
    print(f"wrote fixtures to {OUT}")


if __name__ == "__main__":
    main()
