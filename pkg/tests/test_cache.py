import json
import warnings

from hallforge.cache import CacheWarning, HallCache, cache_key
from hallforge.hall import HallAlgebra
from hallforge.quiver import A2, JORDAN


def _fill(tmp_path, quiver=JORDAN, q=2):
    cache = HallCache(tmp_path, quiver, q, 10**7)
    alg = HallAlgebra(quiver, q, cache=cache)
    x = alg.E("i", 1)
    alg.comultiply(x * x * x)
    return cache, alg


def test_write_then_read(tmp_path):
    cache, alg = _fill(tmp_path)
    again = HallCache(tmp_path, JORDAN, 2, 10**7)
    assert again.load() == alg._hall
    assert len(alg._hall) > 0


def test_key_depends_on_inputs():
    assert cache_key(JORDAN, 2, 100) != cache_key(JORDAN, 3, 100)
    assert cache_key(JORDAN, 2, 100) != cache_key(JORDAN, 2, 101)
    assert cache_key(JORDAN, 2, 100) != cache_key(A2, 2, 100)


def test_stale_key_misses(tmp_path):
    _fill(tmp_path)
    assert HallCache(tmp_path, A2, 2, 10**7).load() == {}


def test_corrupt_line_warns_and_recomputes(tmp_path):
    cache, alg = _fill(tmp_path)
    lines = cache.path.read_text().splitlines()
    lost = json.loads(lines[0])
    lines[0] = "{not json"
    cache.path.write_text("\n".join(lines) + "\n")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        fresh = HallCache(tmp_path, JORDAN, 2, 10**7)
        alg2 = HallAlgebra(JORDAN, 2, cache=fresh)
    assert any(issubclass(w.category, CacheWarning) for w in caught)
    key = (lost["M"], lost["N"], lost["L"])
    assert key not in alg2._hall
    m, n, l = (alg2.cls(k) for k in key)
    assert alg2.hall_number(m, n, l) == lost["count"]


def test_spot_check_detects_tampering(tmp_path):
    cache, alg = _fill(tmp_path)
    recs = [json.loads(x) for x in cache.path.read_text().splitlines()]
    for r in recs:
        r["count"] += 1
    cache.path.write_text("".join(json.dumps(r) + "\n" for r in recs))
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        alg2 = HallAlgebra(JORDAN, 2, cache=HallCache(tmp_path, JORDAN, 2, 10**7))
    assert any("spot-check" in str(w.message) for w in caught)
    assert alg2._hall == {}


def test_cache_changes_no_result(tmp_path):
    _fill(tmp_path, A2)
    with_cache = HallAlgebra(A2, 2, cache=HallCache(tmp_path, A2, 2, 10**7))
    without = HallAlgebra(A2, 2)
    for alg in (with_cache, without):
        x = alg.E("i", 1) * alg.E("j", 1) * alg.E("i", 1)
        alg.result = (x.to_dict(), alg.comultiply(x).to_dict())
    assert with_cache.result == without.result
