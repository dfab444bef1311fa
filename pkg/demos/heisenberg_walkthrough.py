"""Build the hierarchy of the two-dimensional Leibniz algebra e o e = f and print it."""
from tensorhierarchy import catalog
from tensorhierarchy.dgla import full_report, homology, run_pipeline, status_lines
from tensorhierarchy.fileformats import triple_from_dict

t = triple_from_dict(catalog.get("heisenberg_leibniz"), "heisenberg_leibniz")
print("flags:", t.flags.as_dict())

p = run_pipeline(t, 4)
d = p.dgla
for deg in d.degrees:
    print(f"degree {deg:>2}: dim {d.dim(deg)}  {d.labels.get(deg, [])}")

print("d_-1 =", [[str(x) for x in r] for r in p.tower.partial[-1].to_lists()])
print("nonzero brackets:")
for (dx, ix, dy, iy), v in sorted(d.bracket.items()):
    print(f"  [{d.label((dx, ix))}, {d.label((dy, iy))}] = { {k: str(x) for k, x in v.items()} }")

rep = full_report(p)
print(f"{len(rep.checks)} checks, {len(rep.failures)} failures")
for r in homology(d):
    print(f"H at {r.degree}: {r.h}")
print("\n".join(status_lines(d, t)))
