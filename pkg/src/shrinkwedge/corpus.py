"""Fixture sets for three standard shrinking wedges.

* ``earring``    -- circles, integer summands
* ``rp-wedge``   -- real projective spaces, summands Z/2
* ``tori-wedge`` -- tori, summands Z x Z
"""

from __future__ import annotations

from pathlib import Path

NAMES = ("earring", "rp-wedge", "tori-wedge")

_FIXTURES = {
    "earring": {
        "config": "default integer\n",
        "words": [
            "omega[diag 1 1 const 1]",
            "( 2:1 5:1 )",
            "( 2:1 5:1 2:1 7:1 )",
            "( 1:1 omega[diag 2 1 const 1] )",
            "omega*[diag 1 1 const -1]",
            "( 1:1 2:-1 omega[diag 3 2 cycle 1 -1] 4:2 )",
        ],
        "coeff": "integer",
        "in": [
            "iso 1 e 1",
            "iso 2 ( 1:1 3:-1 ) 2",
            "tail limit e summand affine 1 1 escape affine 1 1 members empty coeffs const 1",
            "tail limit ( 1:1 ) summand affine 2 1 escape affine 2 1 members diag 3 1 const 1 coeffs cycle 1 -1",
        ],
        "out": [
            "iso 1 e 1",
            "tail limit e summand affine 2 1 escape 0 members diag 1 0 pow 1 coeffs const 1",
        ],
    },
    "rp-wedge": {
        "config": "default cyclic 2\n",
        "words": [
            "omega[diag 1 1 const 1]",
            "( 2:1 5:1 )",
            "( 1:1 2:1 1:1 3:1 )",
            "omega*[diag 2 2 const 1]",
        ],
        "coeff": "integer",
        "in": [
            "iso 1 ( 2:1 ) 1",
            "iso 3 ( 1:1 2:1 ) -1",
            "tail limit e summand affine 1 1 escape affine 1 1 members empty coeffs const 1",
        ],
        "out": [
            "tail limit ( 2:1 ) summand 1 escape affine 2 1 members diag 3 1 const 1 coeffs const 1",
        ],
    },
    "tori-wedge": {
        "config": "default product 2\n",
        "words": [
            "omega[diag 1 1 cycle 1,0 0,1]",
            "( 2:1,0 5:0,1 )",
            "( 1:1,1 2:0,1 1:-1,-1 )",
        ],
        "coeff": "integer",
        "in": [
            "iso 2 ( 1:1,0 ) 1",
            "tail limit ( 1:0,1 ) summand affine 2 1 escape affine 2 1 members diag 3 1 const 1,1 coeffs const 3",
        ],
        "out": [
            "tail limit e summand affine 2 1 escape 1 members diag 1 0 const 1,0 coeffs const 1",
        ],
    },
}


def files(name: str) -> dict:
    """File name -> contents for the named fixture set."""
    try:
        fx = _FIXTURES[name]
    except KeyError:
        raise ValueError(f"unknown corpus {name!r}; choose from {', '.join(NAMES)}") from None
    cfg_name = f"{name}.cfg"

    def theta(lines):
        head = [f"theta {cfg_name} level 8", f"coeff default {fx['coeff']}"]
        return "\n".join(head + lines) + "\n"

    return {
        cfg_name: fx["config"],
        f"{name}.words": "\n".join(fx["words"]) + "\n",
        f"{name}-in.theta": theta(fx["in"]),
        f"{name}-out.theta": theta(fx["out"]),
    }


def write_corpus(name: str, out: Path) -> list:
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for fname, text in files(name).items():
        path = out / fname
        path.write_text(text)
        written.append(path)
    return written
