import logging

import pytest

from core.bits import BitStream
from core.dyadic import Dyadic
from core.errors import ParseError, ValidationError
from selfmod.modulus import ModulusFunction
from services import CoverService, NscrService, ReaService, SelfModService, TableService, streamspec_parse
from services.reports import TABLE_COLUMNS
from solovay import build_cover


@pytest.mark.parametrize("spec, prefix", [
    ("zeros", "000000"),
    ("ones", "111111"),
    ("alt", "010101"),
    ("periodic:110", "110110"),
    ("  periodic:01 ", "010101"),
])
def test_streamspec_forms(spec, prefix):
    assert str(streamspec_parse(spec).prefix(6)) == prefix


def test_streamspec_random_is_seeded():
    first, second = streamspec_parse("random:7"), streamspec_parse("random:7")
    assert first.name == "random:7"
    assert first.prefix(128) == second.prefix(128)


@pytest.mark.parametrize("spec, position", [
    ("bogus", 0),
    ("spiral:01", 0),
    ("periodic:", 9),
    ("periodic:1021", 11),
    ("random:x", 7),
    ("file:no/such/bits.txt", 5),
])
def test_streamspec_errors(spec, position):
    with pytest.raises(ParseError) as info:
        streamspec_parse(spec)
    assert info.value.position == position


def test_file_stream_repeats_its_last_bit(tmp_path, caplog):
    path = tmp_path / "bits.txt"
    path.write_text("0101\n")
    stream = streamspec_parse(f"file:{path}")
    with caplog.at_level(logging.WARNING, logger="services.streams"):
        assert str(stream.prefix(8)) == "01011111"
        stream.bit(20)
    warnings = [r for r in caplog.records if "repeating" in r.getMessage()]
    assert len(warnings) == 1


def test_file_stream_rejects_non_bits(tmp_path):
    path = tmp_path / "bits.txt"
    path.write_text("01x1")
    with pytest.raises(ParseError) as info:
        streamspec_parse(f"file:{path}")
    assert info.value.details["file_position"] == 2


def test_table_frame(leb):
    service = TableService(leb, 4)
    frame = service.frame()
    assert list(frame.columns) == TABLE_COLUMNS
    assert all(str(dtype) == "Int64" for dtype in frame.dtypes)
    assert frame["g_hat"].isna().tolist() == [False, False, False, True, True]


def test_table_csv(leb):
    lines = TableService(leb, 4).to_csv().splitlines()
    assert lines[0] == "l,h,h_hat,n,g,g_hat"
    assert lines[1] == "0,0,0,0,1,2"
    assert lines[4] == "3,3,3,3,4,"


def test_table_report_is_cached(quarter):
    service = TableService(quarter, 8)
    assert service.table is service.table
    assert service.report()["h"] == [0, 1, 1, 2, 2, 3, 3, 3, 4]


def test_cover_report_level_one(leb, leb_table):
    report = CoverService(leb, leb_table).cover_report(BitStream.periodic("011"), 1, 6)
    assert report["oracle"] == "periodic:011"
    assert report["covers_count"] == 6
    assert report["mass_comparison"]["ok"]
    assert report["budget"] == "2/2^0"


def test_cover_report_level_two_has_no_mass_comparison(leb, leb_table):
    report = CoverService(leb, leb_table).cover_report(BitStream.ones(), 2, 4, budget=Dyadic(3))
    assert "mass_comparison" not in report
    assert report["budget"] == "3/2^0"
    assert len(report["elements"]) == 4


def test_nesting_report(leb, leb_table):
    service = CoverService(leb, leb_table)
    test = build_cover(BitStream.ones(), 4, leb, leb_table, 5)
    report = service.nesting_report(test, 2)
    assert [(s["from_level"], s["to_level"]) for s in report["steps"]] == [(4, 3), (3, 2)]
    assert report["violations"] == 0 and report["ok"]


@pytest.mark.parametrize("down_to", [0, 4, 5])
def test_nesting_report_rejects_bad_targets(leb, leb_table, down_to):
    test = build_cover(BitStream.ones(), 4, leb, leb_table, 5)
    with pytest.raises(ValidationError):
        CoverService(leb, leb_table).nesting_report(test, down_to)


def test_rea_demo_report(worked_operator):
    report = ReaService(worked_operator, 100000).demo_report(BitStream.ones(), 3)
    assert report["f"] == [37, 134, 1, 134]
    assert report["B"] == "1101"
    assert report["C_length"] == 309
    assert [row["s_A(n)"] for row in report["layout"]] == [1, 37, "∞", 134]


def test_rea_lift_report(worked_operator, leb, leb_table):
    report = ReaService(worked_operator, 1000).lift_report(BitStream.ones(), leb, leb_table, 2, 12)
    assert report["oracle"] == "ones"
    assert report["operator"] == "worked_operator"
    assert report["level"] == 1
    assert report["violations"] == 0
    assert report["covers_count"] >= 12


def test_tk_report(leb, leb_table):
    report = SelfModService(ModulusFunction.poly(1)).tk_report(leb, leb_table, 1, 6)
    assert report["elements"] == 2 ** 7 - 1
    assert [p["i"] for p in report["partial_sums"]] == list(range(7))
    sums = [Dyadic.parse(p["sum"]["hi"]) for p in report["partial_sums"]]
    assert sums == sorted(sums)
    assert not Dyadic.parse(report["bound"]["hi"]) < sums[-1]
    assert report["violations"] == 0


def test_failures_report_with_replay(leb, leb_table):
    service = SelfModService(ModulusFunction.poly(1))
    report = service.failures_report(BitStream.seeded(5), 5, leb, leb_table, 1, n0=0)
    assert report["indices"] == []
    assert report["run"]["lengths"] == [3, 9, 21, 45, 93, 189]
    assert report["domination"]["G"] == [9, 32]
    assert report["violations"] == 0


def test_failures_report_fast_modulus(leb, leb_table):
    report = SelfModService(ModulusFunction.exp()).failures_report(BitStream.alternating(), 2, leb, leb_table, 1)
    assert report["indices"] == [1]
    assert "domination" not in report


def test_generic_report():
    service = SelfModService(ModulusFunction.poly(1))
    report = service.generic_report(BitStream.seeded(2), ["all", "suffix:0110", "empty"], 3)
    assert report["met"] == [0, 1]
    assert [w["i"] for w in report["witnesses"]] == [0, 1]
    assert all(w["in_W"] for w in report["witnesses"])
    assert report["violations"] == 0


def test_nscr_service():
    service = NscrService(ModulusFunction.poly(1))
    report = service.classify("100")
    assert report["status"] == "on_tree"
    assert report["modulus"] == {"kind": "poly", "degree": 1}
    assert service.boundaries(2)["ends"] == [3, 9]
    with pytest.raises(ParseError):
        service.classify("10a")
