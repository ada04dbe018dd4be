"""Write table files for the 14 groups of order 40 into tests/data/groups40/.

Every group of order 40 has a normal Sylow 5-subgroup, so it is C5 ⋊ P for a
group P of order 8 acting through a homomorphism P -> Aut(C5) = (Z/5)^*.
We build all such extensions, keep one per isomorphism class, and shuffle
the non-identity labels so the files do not share our internal numbering.

    python scripts/make_order40_groups.py [outdir]
"""

import itertools
import sys
from pathlib import Path

import numpy as np

from mixedmoore import catalog
from mixedmoore.groups import generating_sequence, relabel_group

UNITS = (1, 2, 3, 4)


def order8_groups():
    C, X = catalog.cyclic, catalog.direct_product
    return [C(8), X(C(4), C(2)), X(X(C(2), C(2)), C(2)), catalog.dihedral(8),
            catalog._named(catalog.dicyclic(8), "Q8")]


def homs_to_units(P):
    """All homomorphisms P -> (Z/5)^*, given by images of a generating sequence."""
    gens = generating_sequence(P)
    out = set()
    for imgs in itertools.product(UNITS, repeat=len(gens)):
        phi = {0: 1}
        frontier = [0]
        ok = True
        while frontier and ok:
            nxt = []
            for x in frontier:
                for g, u in zip(gens, imgs):
                    y, v = P.rows[x][g], phi[x] * u % 5
                    if y not in phi:
                        phi[y] = v
                        nxt.append(y)
                    elif phi[y] != v:
                        ok = False
            frontier = nxt
        if ok and all(phi[P.rows[a][b]] == phi[a] * phi[b] % 5
                      for a in range(8) for b in range(8)):
            out.add(tuple(phi[x] for x in range(8)))
    return sorted(out)


def main(outdir):
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    cands = []
    for P in order8_groups():
        for units in homs_to_units(P):
            img = sorted(set(units))
            cands.append(catalog.cyclic_extension(5, P, units, name=f"C5:{P.name}[{','.join(map(str, img))}]"))
    groups = catalog.dedupe_isomorphic(cands)
    print(f"{len(cands)} extensions, {len(groups)} isomorphism classes")
    rng = np.random.default_rng(40)
    for k, G in enumerate(groups, start=1):
        perm = np.concatenate([[0], 1 + rng.permutation(G.order - 1)])
        H = relabel_group(G, perm, name=G.name)
        path = outdir / f"order40_{k:02d}.gtab"
        catalog.write_table(H, path)
        print(path, G.name)


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else Path(__file__).parent.parent / "tests/data/groups40")
