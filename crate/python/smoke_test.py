"""Smoke test for the krfusion extension module.

Uses an installed `krfusion` if present (e.g. after `maturin develop` in
crates/py), otherwise the shared library built by
`cargo build -p krpy --features extension-module`.
"""

import importlib.machinery
import importlib.util
import json
import pathlib
import sys


def load():
    try:
        import krfusion

        return krfusion
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for profile in ("release", "debug"):
        lib = root / "target" / profile / "libkrfusion.so"
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("krfusion", str(lib))
            found = importlib.util.spec_from_loader("krfusion", loader)
            mod = importlib.util.module_from_spec(found)
            loader.exec_module(mod)
            return mod
    sys.exit("krfusion not found: build it with `cargo build -p krpy --features extension-module`")


def main():
    kr = load()

    x = kr.RatQ("(1+q^2)/(q)")
    assert str(kr.RatQ(str(x))) == str(x)
    assert str(x * kr.RatQ("(q)/(1)")) == "(1+q^2)/(1)"
    assert x.val() == -1 and x.is_positive()
    assert kr.RatQ("(1+q)/(1)").member("1+qA")
    try:
        x / kr.RatQ("(0)/(1)")
        raise AssertionError("division by zero accepted")
    except ZeroDivisionError:
        pass

    w1 = kr.build("g2-1", 1)
    assert w1.dim == 7
    norms = [str(w1.gram_entry(k, k)) for k in range(7)]
    assert sorted(norms) == ["(1)/(1)"] * 6 + ["(1+q^2)/(1)"], norms
    ok, reports = w1.verify()
    assert ok, reports
    assert json.loads(reports)["branch"]["pass"]
    ok, graph, dot = w1.crystal()
    assert ok and len(json.loads(graph)["nodes"]) == 7
    assert dot.startswith("digraph")

    assert kr.r_solution_dim("g2-1", 1, -1) == 1
    w2 = kr.build("g2-1", 2)
    assert w2.dim == 34 and w2.verify()[0]
    assert kr.build("g2-1", 2, recursive=True).dim == 34
    assert kr.s_csv("g2-1", 2).splitlines()[0] == "a,b,c,d,m1,m2"
    print("krfusion smoke test: ok")


if __name__ == "__main__":
    main()
