import pytest

from cnlreduce.lexicon import Lexicon
from cnlreduce.pipeline import default_config

HARRIS_SOURCE_TEXT = "Harris can teach linguistics on Tuesdays."
HARRIS_TARGET_TEXT = "Harris can teach a linguistic class on Tuesday."
HARRIS_SOURCE = ("drs([x1],[named(x1,harris,per),pos(drs([e1,x2,x3],[pred(e1,teach,v,0),"
               "rel(e1,x1,agent),rel(e1,x2,patient),pred(x2,linguistics,n,0),rel(e1,x3,on),"
               "pred(x3,tuesday,n,0)]))])")
HARRIS_REDUCED = ("drs([x1],[named(x1,harris,per),pos(drs([e1,x2,x3],[pred(e1,teach,v,0),"
                "rel(e1,x1,agent),rel(e1,x2,patient),pred(x2,class,n,0),"
                "pred(x2,linguistic,a,0),rel(e1,x3,on),pred(x3,tuesday,n,0)]))])")
R1 = "rule r1:\nmatch pred(?x,linguistics,n,?s)\nreplace pred(?x,class,n,0), pred(?x,linguistic,a,0)"


@pytest.fixture(scope="session")
def lex():
    return Lexicon.default()


@pytest.fixture(scope="session")
def cfg():
    return default_config()


# -- acceptance summary -----------------------------------------------------------

ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record one PASS/FAIL line for an acceptance criterion.

    The test calls ``criterion(number, title, detail)`` after computing its
    result; the line is PASS only if the test body then finishes cleanly.
    """
    entry = {}

    def record(number, title, detail=""):
        entry.update(number=number, title=title, detail=detail)

    yield record
    if entry:
        failed = getattr(request.node, "rep_call", None)
        ok = failed is not None and failed.passed
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {entry['number']}: {entry['title']}"
        if entry["detail"]:
            line += f" ({entry['detail']})"
        ACCEPTANCE.append((entry["number"], line))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
