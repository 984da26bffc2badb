"""Smoke test for the mcl_py extension.

Build and install first, for example:
    maturin build --release -m crates/py/Cargo.toml -o dist && pip install dist/mcl_py-*.whl
"""

import json

import mcl_py


def main() -> None:
    live = mcl_py.parse("~<{a,b}>false")
    assert live.agents == ["a", "b"]
    assert live.depth() == 1
    assert mcl_py.decide_valid(live)["valid"]

    f = mcl_py.parse("<{a}>p -> [{b}]q", agents=["a", "b"])
    assert f.core() == "~(<{a}>p & ~~<{b}>~q)"
    assert mcl_py.parse(str(f), agents=["a", "b"]) == f

    clauses = mcl_py.normalize(mcl_py.parse("<{a}>p"))
    assert clauses == ["false | ((true) -> ((<{a}>p) | (<{a}>false)))"], clauses

    two = mcl_py.Model.fixture("two_masks")
    assert two.classify()["summary"] == "CGM: serial, independent, deterministic"
    one = mcl_py.Model.fixture("one_mask")
    c = one.classify()
    assert c["is_gcgm"] and not c["serial"] and not c["independent"] and not c["deterministic"]
    assert one.eval("<{a}>m_a", state="s0")
    assert one.eval(mcl_py.parse("<{a}>m_a"), state="s0")

    ia = mcl_py.parse("<{a}>p & <{b}>q -> <{a,b}>(p & q)")
    v = mcl_py.decide_valid(ia)
    assert not v["valid"]
    cm = v["countermodel"]
    assert cm.designated == "hub"
    assert not cm.eval(ia)
    reloaded = mcl_py.Model.from_json(cm.to_json())
    assert reloaded.states == cm.states
    assert not reloaded.eval(ia)
    assert json.loads(cm.to_json())["designated"] == "hub"

    s = mcl_py.decide_sat(mcl_py.parse("<{a}>p & ~<{a,b}>p"))
    assert not s["satisfiable"] and s["witness"] is None

    try:
        mcl_py.parse("<{a}p")
    except ValueError:
        pass
    else:
        raise AssertionError("syntax error not raised")

    print("mcl_py smoke test: ok")


if __name__ == "__main__":
    main()
