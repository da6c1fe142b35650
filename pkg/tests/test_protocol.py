"""Protocol text format: parsing, validation errors with line numbers, and
the canonical-serialization round trip."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chambersim.protocol import (
    Measure,
    Protocol,
    ProtocolError,
    Seed,
    Set,
    Wait,
    load_protocol,
    parse_protocol,
    save_protocol,
    serialize_protocol,
)
from chambersim.variables import Config


GOOD = """\
# spin up, then open the hatch
CHAMBER,wt,standard
SEED,7

SET,load_in,0.5
WAIT,2000
MSR,10,7
SET,hatch,45
MSR,10,3.5
"""


def test_parse_basic_protocol():
    p = parse_protocol(GOOD)
    assert p.config is Config.WT_STANDARD
    assert p.seed == 7
    assert p.instructions == (
        Seed(7),
        Set("load_in", 0.5),
        Wait(2000.0),
        Measure(10, 7.0),
        Set("hatch", 45.0),
        Measure(10, 3.5),
    )


def test_comments_and_blank_lines_ignored():
    p = parse_protocol("# x\n\nCHAMBER,lt,standard\n# y\nMSR,1,10\n")
    assert p.instructions == (Measure(1, 10.0),)


def test_seed_is_optional():
    assert parse_protocol("CHAMBER,lt,standard\nMSR,1,1\n").seed is None


def test_header_must_come_first():
    with pytest.raises(ProtocolError, match="line 1: expected CHAMBER header"):
        parse_protocol("SET,load_in,1\n")


def test_duplicate_header_rejected():
    with pytest.raises(ProtocolError, match="line 2: duplicate CHAMBER"):
        parse_protocol("CHAMBER,wt,standard\nCHAMBER,wt,standard\n")


def test_unknown_chamber_and_config():
    with pytest.raises(ProtocolError, match="unknown chamber 'xx'"):
        parse_protocol("CHAMBER,xx,standard\n")
    with pytest.raises(ProtocolError, match="unknown config 'camera' for chamber wt"):
        parse_protocol("CHAMBER,wt,camera\n")


def test_seed_placement_enforced():
    with pytest.raises(ProtocolError, match="SEED must be the first instruction"):
        parse_protocol("CHAMBER,wt,standard\nSET,load_in,1\nSEED,1\n")
    with pytest.raises(ProtocolError, match="appear once"):
        parse_protocol("CHAMBER,wt,standard\nSEED,1\nSEED,2\n")


def test_seed_range():
    parse_protocol(f"CHAMBER,wt,standard\nSEED,{2**64 - 1}\n")
    with pytest.raises(ProtocolError, match="unsigned 64-bit"):
        parse_protocol(f"CHAMBER,wt,standard\nSEED,{2**64}\n")
    with pytest.raises(ProtocolError, match="not an integer"):
        parse_protocol("CHAMBER,wt,standard\nSEED,1.5\n")


def test_set_validation_carries_line_number():
    with pytest.raises(ProtocolError, match="line 3") as exc:
        parse_protocol("CHAMBER,wt,standard\nMSR,1,1\nSET,load_in,2\n")
    assert exc.value.line == 3


def test_set_unknown_variable():
    with pytest.raises(ProtocolError, match="unknown variable 'lift'"):
        parse_protocol("CHAMBER,wt,standard\nSET,lift,1\n")


def test_set_sensor_rejected():
    with pytest.raises(ProtocolError, match="cannot SET sensor"):
        parse_protocol("CHAMBER,wt,standard\nSET,rpm_in,100\n")


def test_wait_validation():
    with pytest.raises(ProtocolError, match="nonnegative"):
        parse_protocol("CHAMBER,wt,standard\nWAIT,-1\n")
    with pytest.raises(ProtocolError, match="not a number"):
        parse_protocol("CHAMBER,wt,standard\nWAIT,soon\n")


def test_msr_count_validation():
    with pytest.raises(ProtocolError, match="positive integer"):
        parse_protocol("CHAMBER,wt,standard\nMSR,0,1\n")
    with pytest.raises(ProtocolError, match="positive integer"):
        parse_protocol("CHAMBER,wt,standard\nMSR,2.5,1\n")


def test_msr_rate_limits_per_chamber():
    parse_protocol("CHAMBER,lt,standard\nMSR,1,10\n")
    with pytest.raises(ProtocolError, match="exceeds 10 Hz limit of chamber lt"):
        parse_protocol("CHAMBER,lt,standard\nMSR,1,11\n")
    with pytest.raises(ProtocolError, match="exceeds 7 Hz limit of chamber wt"):
        parse_protocol("CHAMBER,wt,standard\nMSR,1,7.5\n")
    with pytest.raises(ProtocolError, match="must be positive"):
        parse_protocol("CHAMBER,wt,standard\nMSR,1,0\n")


def test_unknown_instruction():
    with pytest.raises(ProtocolError, match="unknown instruction 'JUMP'"):
        parse_protocol("CHAMBER,wt,standard\nJUMP,3\n")


def test_empty_text_rejected():
    with pytest.raises(ProtocolError, match="missing CHAMBER header"):
        parse_protocol("# nothing here\n")


def test_serialize_round_trip_exact():
    p = parse_protocol(GOOD)
    assert parse_protocol(serialize_protocol(p)) == p


def test_serialize_is_canonical_fixed_point():
    text = serialize_protocol(parse_protocol(GOOD))
    assert serialize_protocol(parse_protocol(text)) == text
    assert text.endswith("\n") and "\r" not in text


def test_save_and_load(tmp_path):
    p = parse_protocol(GOOD)
    path = tmp_path / "p.txt"
    save_protocol(p, path)
    assert load_protocol(path) == p


_WT_SETS = st.sampled_from(
    [("load_in", 0.3), ("load_out", 1.0), ("hatch", 22.5), ("pot_1", 200),
     ("res_in", 0), ("osr_mic", 8), ("v_1", 2.56)]
)
_INSTRUCTIONS = st.one_of(
    _WT_SETS.map(lambda kv: Set(*kv)),
    st.floats(min_value=0, max_value=1e6, allow_nan=False).map(Wait),
    st.tuples(
        st.integers(min_value=1, max_value=10_000),
        st.floats(min_value=1e-3, max_value=7.0, allow_nan=False),
    ).map(lambda t: Measure(*t)),
)


@given(
    seed=st.one_of(st.none(), st.integers(min_value=0, max_value=2**64 - 1)),
    body=st.lists(_INSTRUCTIONS, max_size=12),
)
@settings(max_examples=150, deadline=None)
def test_round_trip_property(seed, body):
    ins = ([Seed(seed)] if seed is not None else []) + body
    p = Protocol(Config.WT_STANDARD, tuple(ins))
    text = serialize_protocol(p)
    assert parse_protocol(text) == p
    assert serialize_protocol(parse_protocol(text)) == text
