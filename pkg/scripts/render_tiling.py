"""Render the plabic tiling of a collection as SVG, with uniform or given angles."""
import argparse
from pathlib import Path

from plabic_dimer.collection import build_maximal_collection
from plabic_dimer.dimer import figure_collection, gamma_of_collection
from plabic_dimer.geometry import AngleAssignment, check_isoradial, embed, svg_export

ap = argparse.ArgumentParser(description=__doc__)
ap.add_argument("k", type=int)
ap.add_argument("n", type=int)
ap.add_argument("--angles", help="comma-separated angles in radians")
ap.add_argument("--out", default="tiling.svg")
args = ap.parse_args()

if (args.k, args.n) == (3, 7):
    C = figure_collection()
else:
    C = build_maximal_collection(args.k, args.n)
Q = gamma_of_collection(C)
A = AngleAssignment.uniform(args.n) if not args.angles else AngleAssignment([float(x) for x in args.angles.split(",")])
emb = embed(Q, A)
rep = check_isoradial(Q, emb)
Path(args.out).write_text(svg_export(Q, emb))
print(f"wrote {args.out}; isoradial residual {rep.max_residual:.2e}")
