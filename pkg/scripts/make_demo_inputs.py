#!/usr/bin/env python3
"""Write sample input files for every CLI subcommand into a directory.

Usage: python scripts/make_demo_inputs.py [outdir]
"""

import pathlib
import sys

from isotower.certjson import algebra_doc, cyclic_doc, quaternion_doc, system_doc
from isotower.csa import matrix_algebra
from isotower.presets import cyclic_sqrt, field_cubic
from isotower.quadforms import QFSystem, QuadraticForm
from isotower.serialize import canonical_dumps
from isotower.splitting import standard_quaternion
from isotower.tower import QQ


def main():
    outdir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "demo_inputs")
    outdir.mkdir(parents=True, exist_ok=True)

    system = QFSystem(
        (
            QuadraticForm.diagonal(QQ, 0, [1, 1, 1, 1]),
            QuadraticForm.diagonal(QQ, 0, [1, 2, 3, 4]),
        )
    )
    (outdir / "system_r2.json").write_text(canonical_dumps(system_doc(system)))

    cubic = field_cubic()
    quat = standard_quaternion(cubic.gen(), cubic.rational(2))
    (outdir / "cubic_quat.json").write_text(canonical_dumps(quaternion_doc(quat)))

    cyc = cyclic_sqrt(2)
    cor_input = {
        "algebra": algebra_doc(matrix_algebra(cyc.tower, 1)),
        "cyclic": cyclic_doc(cyc),
    }
    (outdir / "m2_sqrt2.json").write_text(canonical_dumps(cor_input))

    print(f"wrote {outdir}/system_r2.json   (isotropy --input)")
    print(f"wrote {outdir}/cubic_quat.json  (split-quaternion --input)")
    print(f"wrote {outdir}/m2_sqrt2.json    (corestrict --input)")


if __name__ == "__main__":
    main()
