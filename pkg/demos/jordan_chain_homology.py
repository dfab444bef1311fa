"""A stringent triple whose tower keeps going: watch the homology below -2 at growing depth."""
from tensorhierarchy import catalog
from tensorhierarchy.dgla import homology, run_pipeline, status_lines, verify_axioms
from tensorhierarchy.fileformats import triple_from_dict

t = triple_from_dict(catalog.get("jordan_chain_leibniz"), "jordan_chain_leibniz")
for N in (4, 5, 6, 7):
    p = run_pipeline(t, N)
    assert verify_axioms(p.dgla).ok
    dims = [p.dgla.dim(-i) for i in range(1, N + 1)]
    hs = [r.h for r in homology(p.dgla) if r.degree < -1]
    print(f"N={N}  dims T: {dims}  H below -1 (bottom first): {hs}")
print("\n".join(status_lines(p.dgla, t)))
