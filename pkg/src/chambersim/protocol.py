"""Experiment protocol files: parsing, validation, canonical serialization.

A protocol is a UTF-8 text file (LF line endings, ``.txt`` by convention):

    CHAMBER,<lt|wt>,<config>      header, first meaningful line
    SEED,<uint64>                 optional, must be the first instruction
    SET,<column>,<number>         assign an actuator or sensor parameter
    WAIT,<milliseconds>           advance the virtual clock
    MSR,<count>,<hz>              emit measurement rows at a sampling rate

Whole-line ``#`` comments and blank lines are ignored. All validation errors
carry the 1-based line number of the offending line. Serialization emits a
canonical form whose numbers use the shortest decimal that round-trips, so
``parse(serialize(p)) == p`` holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .variables import MAX_HZ, Chamber, Config, validate_setting


class ProtocolError(ValueError):
    """Protocol syntax or validation failure, tagged with its source line."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class Seed:
    value: int


@dataclass(frozen=True)
class Set:
    variable: str
    value: float | int


@dataclass(frozen=True)
class Wait:
    milliseconds: float


@dataclass(frozen=True)
class Measure:
    count: int
    hz: float


Instruction = Seed | Set | Wait | Measure


@dataclass(frozen=True)
class Protocol:
    config: Config
    instructions: tuple[Instruction, ...]

    @property
    def seed(self) -> int | None:
        for ins in self.instructions:
            if isinstance(ins, Seed):
                return ins.value
        return None


_CONFIG_NAMES = {
    (Chamber.LT, "standard"): Config.LT_STANDARD,
    (Chamber.LT, "camera"): Config.LT_CAMERA,
    (Chamber.WT, "standard"): Config.WT_STANDARD,
    (Chamber.WT, "pressure_control"): Config.WT_PRESSURE_CONTROL,
}


def _number(token: str, what: str, line: int) -> float:
    try:
        return float(token)
    except ValueError:
        raise ProtocolError(f"{what} {token!r} is not a number", line) from None


def parse_protocol(text: str) -> Protocol:
    """Parse and validate protocol text; raises ProtocolError with line numbers."""
    config: Config | None = None
    chamber: Chamber | None = None
    instructions: list[Instruction] = []
    seen_payload = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split(",")]
        op = fields[0].upper()

        if config is None:
            if op != "CHAMBER":
                raise ProtocolError(f"expected CHAMBER header, got {fields[0]!r}", line_no)
            if len(fields) != 3:
                raise ProtocolError("CHAMBER takes exactly two arguments: chamber, config", line_no)
            try:
                chamber = Chamber(fields[1])
            except ValueError:
                raise ProtocolError(f"unknown chamber {fields[1]!r}, expected lt or wt", line_no) from None
            key = (chamber, fields[2])
            if key not in _CONFIG_NAMES:
                valid = sorted(c for (ch, c) in _CONFIG_NAMES if ch is chamber)
                raise ProtocolError(
                    f"unknown config {fields[2]!r} for chamber {chamber.value}; expected one of {valid}",
                    line_no,
                )
            config = _CONFIG_NAMES[key]
            continue

        if op == "CHAMBER":
            raise ProtocolError("duplicate CHAMBER header", line_no)
        elif op == "SEED":
            if len(fields) != 2:
                raise ProtocolError("SEED takes exactly one argument", line_no)
            if seen_payload or any(isinstance(i, Seed) for i in instructions):
                raise ProtocolError("SEED must be the first instruction and appear once", line_no)
            try:
                value = int(fields[1])
            except ValueError:
                raise ProtocolError(f"seed {fields[1]!r} is not an integer", line_no) from None
            if not 0 <= value < 2**64:
                raise ProtocolError(f"seed {value} outside the unsigned 64-bit range", line_no)
            instructions.append(Seed(value))
        elif op == "SET":
            if len(fields) != 3:
                raise ProtocolError("SET takes exactly two arguments: variable, value", line_no)
            value = _number(fields[2], "value", line_no)
            try:
                canonical = validate_setting(config, fields[1], value)
            except ValueError as e:
                raise ProtocolError(str(e), line_no) from None
            instructions.append(Set(fields[1], canonical))
            seen_payload = True
        elif op == "WAIT":
            if len(fields) != 2:
                raise ProtocolError("WAIT takes exactly one argument: milliseconds", line_no)
            ms = _number(fields[1], "duration", line_no)
            if ms < 0:
                raise ProtocolError(f"duration {ms} must be nonnegative", line_no)
            instructions.append(Wait(float(ms)))
            seen_payload = True
        elif op == "MSR":
            if len(fields) != 3:
                raise ProtocolError("MSR takes exactly two arguments: count, hz", line_no)
            count_f = _number(fields[1], "count", line_no)
            if not float(count_f).is_integer() or count_f < 1:
                raise ProtocolError(f"count {fields[1]!r} must be a positive integer", line_no)
            hz = _number(fields[2], "rate", line_no)
            limit = MAX_HZ[config.chamber]
            if hz <= 0:
                raise ProtocolError(f"rate {hz} must be positive", line_no)
            if hz > limit:
                raise ProtocolError(
                    f"frequency {_fmt(hz)} exceeds {_fmt(limit)} Hz limit of chamber {config.chamber.value}",
                    line_no,
                )
            instructions.append(Measure(int(count_f), float(hz)))
            seen_payload = True
        else:
            raise ProtocolError(f"unknown instruction {fields[0]!r}", line_no)

    if config is None:
        raise ProtocolError("empty protocol: missing CHAMBER header", 1)
    return Protocol(config, tuple(instructions))


def _fmt(x) -> str:
    """Shortest decimal text that parses back to the same value."""
    if isinstance(x, int):
        return str(x)
    if float(x).is_integer():
        return str(int(x))
    return repr(float(x))


def serialize_protocol(protocol: Protocol) -> str:
    """Canonical text form; parse(serialize(p)) == p exactly."""
    chamber = protocol.config.chamber
    config_name = protocol.config.value.split("_", 1)[1]
    lines = [f"CHAMBER,{chamber.value},{config_name}"]
    for ins in protocol.instructions:
        if isinstance(ins, Seed):
            lines.append(f"SEED,{ins.value}")
        elif isinstance(ins, Set):
            lines.append(f"SET,{ins.variable},{_fmt(ins.value)}")
        elif isinstance(ins, Wait):
            lines.append(f"WAIT,{_fmt(ins.milliseconds)}")
        elif isinstance(ins, Measure):
            lines.append(f"MSR,{ins.count},{_fmt(ins.hz)}")
        else:
            raise TypeError(f"unknown instruction type {type(ins).__name__}")
    return "\n".join(lines) + "\n"


def load_protocol(path) -> Protocol:
    with open(path, encoding="utf-8") as fh:
        return parse_protocol(fh.read())


def save_protocol(protocol: Protocol, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(serialize_protocol(protocol))
