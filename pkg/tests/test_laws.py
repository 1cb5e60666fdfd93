import pytest

from monadpreserve.laws import SabotagedPsi, check_laws
from monadpreserve.monads import builtin_instances

B = builtin_instances()


@pytest.mark.parametrize("sel", list(B))
def test_builtin_satisfies_every_law(sel):
    report = check_laws(B[sel], samples=300, spot_samples=60, seed=1)
    assert report.ok, [(r.law, r.failure) for r in report.failures()]
    assert all(r.checked > 0 for r in report.results.values())


@pytest.mark.parametrize("sel", ["powerset", "dist", "writer:z2"])
def test_sabotaged_psi_is_caught(sel):
    report = check_laws(SabotagedPsi(B[sel]), samples=300, spot_samples=60, seed=1)
    assert not report.ok
    assert "SYM" in {r.law for r in report.failures()}
