"""The lambda-scaling morphisms of the Jordan chain and the maps they induce."""
from tensorhierarchy import catalog
from tensorhierarchy.dgla import run_pipeline
from tensorhierarchy.exactla import RatMatrix
from tensorhierarchy.fileformats import triple_from_dict
from tensorhierarchy.functor import TripleMorphism, check_morphism, induce

t = triple_from_dict(catalog.get("jordan_chain_leibniz"), "jordan_chain_leibniz")
p = run_pipeline(t, 5)


def scale(k):
    return TripleMorphism(RatMatrix.from_rows([[k]]),
                          RatMatrix.from_rows([[k, 0, 0], [0, k ** 2, 0], [0, 0, k ** 3]]))


f2, f3, f6 = (induce(p, p, scale(k)) for k in (2, 3, 6))
for deg in sorted(f2.maps):
    print(f"degree {deg:>2}:", [[str(x) for x in r] for r in f2.maps[deg].to_lists()])
print("chain map and bracket compatible:", check_morphism(f2, p.dgla, p.dgla).ok)
print("G(3) G(2) = G(6):", f3.compose_after(f2) == f6)
