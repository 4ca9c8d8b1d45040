import csv
import io
import json
import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from banachlab.report import (ImpliedConstant, InequalityRecord, VerificationReport, clean, emit_plot_data,
                              infer_implied_constant, merge_reports, out_of_range, scale_rhs)


def test_record_status_and_margin():
    r = InequalityRecord("s", {}, 1.0, 2.0)
    assert r.margin == 1.0 and r.status == "pass" and not r.failed
    r = InequalityRecord("s", {}, 2.0, 1.0, tolerance=0.5)
    assert r.status == "fail" and r.failed
    assert InequalityRecord("s", {}, 1.0 + 1e-10, 1.0, tolerance=1e-9).status == "pass"
    assert not InequalityRecord("s", {}, 2.0, 1.0, hard=False).failed
    assert out_of_range("s", {"k": 3}).status == "out-of-range"


@given(st.floats(-1e6, 1e6), st.floats(-1e6, 1e6), st.floats(0, 10))
def test_status_iff_margin(lhs, rhs, tol):
    r = InequalityRecord("s", {}, lhs, rhs, tolerance=tol)
    assert (r.status == "pass") == (rhs - lhs >= -tol)


def test_clean():
    import numpy as np
    assert clean({"a": np.float64(1.5), "b": (np.int64(2), math.inf), "c": math.nan}) == \
        {"a": 1.5, "b": [2, "inf"], "c": None}


def test_infer_single_equality():
    c = infer_implied_constant([InequalityRecord("s", {}, 3.0, 3.0)], "x", 1.5)
    assert c.value == 1.0 and c.instances == 1


def test_infer_empty_raises():
    with pytest.raises(ValueError):
        infer_implied_constant([], "x", 1.5)


@given(st.lists(st.tuples(st.floats(0.1, 10), st.floats(0.1, 10)), min_size=1, max_size=20),
       st.lists(st.tuples(st.floats(0.1, 10), st.floats(0.1, 10)), max_size=10))
def test_infer_monotone_under_added_records(base, extra):
    recs = [InequalityRecord("s", {}, a, b) for a, b in base]
    more = recs + [InequalityRecord("s", {}, a, b) for a, b in extra]
    c1 = infer_implied_constant(recs, "x", 2)
    c2 = infer_implied_constant(more, "x", 2)
    assert c2.value >= c1.value
    assert c1.value == max(a / b for a, b in base)


def test_scale_rhs_makes_records_pass():
    recs = [InequalityRecord("s", {"k": i}, float(i), 1.0, hard=False) for i in range(1, 5)]
    c = infer_implied_constant(recs, "x", 2)
    scaled = [scale_rhs(r, c.value) for r in recs]
    assert all(r.status == "pass" for r in scaled)
    assert scaled[-1].margin == 0
    assert scaled[0].params == {"k": 1, "rawRhs": 1.0, "constant": 4.0}


def _report(name, consts, n=2):
    rep = VerificationReport(name, {"n": n}, seed=3)
    rep.records = [InequalityRecord(name, {"k": k, "norm": k * 0.5}, k, k + 1) for k in range(1, n + 1)]
    rep.implied_constants = [ImpliedConstant(c, p, v, 1) for c, p, v in consts]
    return rep


def test_merge_max_reduces_and_is_order_stable():
    a = _report("a", [("x", 1.5, 2.0), ("y", 1.5, 1.0)])
    b = _report("b", [("x", 1.5, 3.0), ("x", 1.3, 1.1)])
    ab, ba = merge_reports([a, b]), merge_reports([b, a])
    assert [c.to_json() for c in ab.implied_constants] == [c.to_json() for c in ba.implied_constants]
    assert ab.constant("x").p == 1.3
    vals = {(c.name, c.p): c.value for c in ab.implied_constants}
    assert vals == {("x", 1.3): 1.1, ("x", 1.5): 3.0, ("y", 1.5): 1.0}
    assert len(ab.records) == 4
    for c in a.implied_constants:
        assert vals[(c.name, c.p)] >= c.value


def test_report_json_schema():
    rep = _report("a", [("x", 1.5, 2.0)])
    d = json.loads(rep.dumps())
    assert set(d) >= {"suite", "params", "records", "impliedConstants", "tolerances", "seed"}
    assert set(d["records"][0]) >= {"lhs", "rhs", "margin", "status", "witness"}
    assert d["impliedConstants"] == [{"name": "x", "p": 1.5, "value": 2.0, "instances": 1}]
    assert rep.passed and rep.counts()["pass"] == 2
    assert "2 pass, 0 fail" in rep.summary()
    assert rep.worst_margin() == 1.0


def test_to_csv_one_line_per_record():
    rep = _report("a", [], n=3)
    rows = list(csv.reader(io.StringIO(rep.to_csv())))
    assert len(rows) == 4
    assert rows[0][:4] == ["suite", "index", "status", "hard"]


def test_plot_data():
    rep = _report("a", [], n=3)
    rows = list(csv.reader(io.StringIO(emit_plot_data(rep, "k", "norm"))))
    assert rows == [["k", "norm"], ["1", "0.5"], ["2", "1.0"], ["3", "1.5"]]
    assert emit_plot_data(VerificationReport("e", {}), "k", "norm") == "k,norm\n"
    with pytest.raises(KeyError):
        emit_plot_data(rep, "k", "missing")
    grouped = list(csv.reader(io.StringIO(emit_plot_data(rep, "k", "lhs", group="norm"))))
    assert grouped[0] == ["k", "lhs", "norm"] and len(grouped) == 4
