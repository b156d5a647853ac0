"""Write the canonical fixtures to src/finitespaces/fixtures in the CLI
document format, each with its expected classification table."""
from __future__ import annotations

import os
import sys

from finitespaces import io, models
from finitespaces.coeff import graded

HERE = os.path.dirname(os.path.abspath(__file__))
OUT = os.path.join(HERE, "..", "src", "finitespaces", "fixtures")


def twist_module(n):
    return {
        "name": f"O({n})",
        "stalks": {"x1": {"shifts": [[0]]}, "x2": {"shifts": [[n]]}, "x12": {"shifts": [[0]]}},
        "restrictions": [{"from": "x1", "to": "x12", "matrix": [[1]]}, {"from": "x2", "to": "x12", "matrix": [[1]]}],
    }


def main(out=OUT):
    os.makedirs(out, exist_ok=True)
    docs = {}

    d = io.space_to_dict(models.pseudocircle())
    d["expected"] = models.EXPECTED["pseudocircle"]
    docs["pseudocircle"] = d

    d = io.space_to_dict(models.p1_model((-6, 6)))
    d["modules"] = [twist_module(n) for n in (-4, -3, -2, 0, 1, 2, 3)]
    d["expected"] = models.EXPECTED["P1"]
    docs["p1"] = d

    d = io.space_to_dict(models.doubled_origin_line())
    d["expected"] = models.EXPECTED["doubled_origin_line"]
    docs["doubled_origin_line"] = d

    d = io.space_to_dict(models.doubled_origin_plane())
    d["expected"] = models.EXPECTED["doubled_origin_plane"]
    docs["doubled_origin_plane"] = d

    f = models.qc_refinement()
    docs["plane_coarse"] = io.space_to_dict(f.target)
    d = io.space_to_dict(f.source, {"refine": (f, "plane_coarse.toml")})
    d["expected"] = models.EXPECTED["qc_refinement"]
    docs["plane_fine"] = d

    docs["point_k1"] = io.space_to_dict(models.punctual(graded.base_field(1), "*", (-6, 6)))
    d = io.space_to_dict(models.p1_model((-6, 6)))
    d["morphisms"] = [{"name": "to_point", "target": "point_k1.toml",
                       "points": {p: "*" for p in d["points"]}}]
    docs["p1_over_point"] = d

    for name, doc in docs.items():
        path = os.path.join(out, f"{name}.toml")
        io.save(doc, path)
        print(f"wrote {path}")


if __name__ == "__main__":
    main(*sys.argv[1:])
