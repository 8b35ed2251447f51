from pathlib import Path

import pytest
from hypothesis import given, settings

from model_gen import models, without_arc
from tmkit import parse
from tmkit.check import SEVERITY, CheckCode, has_errors, render, validate
from tmkit.inventory import build_inventory_model
from tmkit.inventory.corpus import model_text

FIXTURES = Path(__file__).parent / "fixtures" / "check"


def codes(m):
    return [d.code for d in validate(m)]


def test_corpus_model_is_clean():
    assert validate(build_inventory_model()) == []


@pytest.mark.parametrize("code", list(CheckCode))
def test_fixture_per_code(code):
    m = parse((FIXTURES / f"{code.value.lower()}.tm").read_text())
    found = set(codes(m))
    assert found == {code.value}


def test_each_code_has_exactly_one_fixture():
    seen = {}
    for path in sorted(FIXTURES.glob("*.tm")):
        for code in set(codes(parse(path.read_text()))):
            seen.setdefault(code, []).append(path.name)
    assert sorted(seen) == sorted(c.value for c in CheckCode)
    assert all(len(files) == 1 for files in seen.values()), seen


def test_severities():
    assert SEVERITY[CheckCode.DANGLING_STAGE] == "warning"
    assert SEVERITY[CheckCode.UNREACHABLE_STAGE] == "warning"
    errors = [c for c in CheckCode if SEVERITY[c] == "error"]
    assert len(errors) == 6


# Each injection turns the clean corpus model into one with exactly one kind of problem.
INJECTIONS = {
    CheckCode.ILLEGAL_STAGE_EDGE: "flow Item: Inventory.Stock.process -> Inventory.Stock.receive;",
    CheckCode.MIXED_STREAMS: "flow Note: QueueSystem.process -> QueueSystem.release;",
    CheckCode.NON_TRANSFER_BOUNDARY: "flow Request: CommercialDepartment.receive -> Inventory.process;",
    CheckCode.TRIGGER_SAME_FLOW: "trigger QueueSystem.receive -> QueueSystem.process;",
    CheckCode.DANGLING_STAGE: "machine Audit { stages process; }",
    CheckCode.UNREACHABLE_STAGE: "machine Archive { stages release; }",
    CheckCode.GUARD_UNDECLARED_VAR: "trigger QueueSystem.process -> Supervisor.create when backlog > 0;",
    CheckCode.EVENT_EMPTY_REGION: 'event E99 "nothing" over { };',
}


@pytest.mark.parametrize("code", list(CheckCode))
def test_injected_violation_is_reported_alone(code):
    text = model_text().rstrip()
    assert text.endswith("}")
    m = parse(text[:-1] + "  " + INJECTIONS[code] + "\n}\n")
    assert set(codes(m)) == {code.value}


def test_illegal_edge_example():
    m = parse("model M { thing T; machine A { stages create, release, receive; } "
              "flow T: A.create -> A.release -> A.receive; }")
    (d,) = validate(m)
    assert d.code == "ILLEGAL_STAGE_EDGE"
    assert d.element == "A.release->A.receive"
    assert render(d).startswith("ILLEGAL_STAGE_EDGE error A.release->A.receive ")


def test_sibling_submachines_must_use_transfer():
    m = parse("model M { thing T; machine P { machine A { stages create, release; } "
              "machine B { stages receive, process; } } "
              "flow T: P.A.create -> P.A.release -> P.B.receive -> P.B.process; }")
    assert codes(m) == ["NON_TRANSFER_BOUNDARY"]


def test_trigger_across_machines_is_fine():
    m = parse("model M { thing T; machine A { stages create, process; } "
              "machine B { stages create; } flow T: A.create -> A.process; "
              "trigger A.process -> B.create; }")
    assert validate(m) == []


def test_warnings_only_is_not_errors():
    m = parse((FIXTURES / "dangling_stage.tm").read_text())
    assert validate(m) and not has_errors(validate(m))


def test_ordering_by_machine_then_arc():
    m = parse("model M { thing T; var x; "
              "machine B { stages create, release, receive; } "
              "machine A { stages create, release, receive; } "
              "flow T: B.create -> B.release -> B.receive; "
              "flow T: A.create -> A.release -> A.receive; "
              "trigger A.create -> A.release when y > 1; }")
    diags = validate(m)
    assert [(d.code, d.element) for d in diags] == [
        ("ILLEGAL_STAGE_EDGE", "A.release->A.receive"),
        ("GUARD_UNDECLARED_VAR", "A.create->A.release"),
        ("TRIGGER_SAME_FLOW", "A.create->A.release"),
        ("ILLEGAL_STAGE_EDGE", "B.release->B.receive"),
    ]


@settings(max_examples=100, deadline=None)
@given(models())
def test_validate_is_deterministic(m):
    assert validate(m) == validate(m)


@settings(max_examples=100, deadline=None)
@given(models())
def test_locality(m):
    before = {(d.code, d.element) for d in validate(m)}
    for i in range(len(m.arcs)):
        after = {(d.code, d.element) for d in validate(without_arc(m, i))}
        new = {entry for entry in after - before
               if entry[0] not in ("UNREACHABLE_STAGE", "DANGLING_STAGE")}
        assert not new, (i, new)
