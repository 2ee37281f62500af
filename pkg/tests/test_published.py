import csv
from importlib import resources

import pytest

from collatz_phase import published as pb
from collatz_phase.analytics import cycle_feasibility, termination_zone_report
from collatz_phase.cumulative import track
from collatz_phase.flow import flow_table
from collatz_phase.phase import MapFamily
from collatz_phase.survey import exhaustive_verify


def test_dataset_has_citations_for_every_value():
    vals = pb.load_published()
    assert len(vals) > 400
    for v in vals:
        assert v.citation.startswith(f"tab:{v.table}")
        float(v.text)


def test_tolerance_follows_printed_digits():
    v = pb.PublishedValue("t", "k", "c", "0.094823", "")
    assert v.tolerance == pytest.approx(5e-7)
    assert pb.PublishedValue("t", "k", "c", "1.12e-4", "").tolerance == pytest.approx(5e-7)
    assert pb.PublishedValue("t", "k", "c", "9232", "").tolerance == 0.5


def test_cycle_table_matches_all_rows():
    rep = pb.compare_paper(cycle_feasibility(8))
    assert rep.mismatched == 0 and rep.matched == 32


def test_family_alpha_column():
    fams = [MapFamily(a, b) for a, b in ((3, 1), (5, 1), (7, 1), (3, 5))]
    rep = pb.compare_paper(fams)
    bad = {c.key for c in rep.cells if not c.match}
    # ln7/ln14 = 0.737350, printed as 0.749636
    assert bad == {"7,1"}


def test_eps_table_flags_x5():
    rep = pb.compare_paper(pb.eps_table(1, 100))
    assert any(c.key == "5" and not c.match for c in rep.cells)


def test_global_maximum_claim_flagged():
    rep = pb.compare_paper(exhaustive_verify(1, 10**5))
    assert rep.cells and rep.mismatched > 0


def test_trajectory_tables():
    rep = pb.compare_paper(track(27))
    assert rep.cells
    with pytest.raises(pb.UnknownCounterpart):
        pb.compare_paper(track(31))


def test_flow_table_fully_flagged():
    pub = pb.published_table("continuous-comparison")
    xs = sorted({int(k) for k, c in pub if c == "flow1"})
    rep = pb.compare_paper(flow_table(xs))
    cells = rep.for_table("continuous-comparison").cells
    flow_cells = [c for c in cells if c.column == "flow1"]
    assert flow_cells and not any(c.match for c in flow_cells)


def test_zone_fraction_cells_present():
    rep = pb.compare_paper(termination_zone_report([0.05], 1, 10**4))
    assert any(c.column == "member_fraction" for c in rep.cells)


def test_unknown_counterpart():
    with pytest.raises(pb.UnknownCounterpart):
        pb.compare_paper(object())


def test_report_serialises():
    rep = pb.compare_paper(cycle_feasibility(3))
    d = rep.to_dict()
    assert d["summary"]["cells"] == len(d["cells"]) == 12
    assert len(next(rep.rows())) == 9
