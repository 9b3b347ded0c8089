"""Smoke test for the graphdec_py extension.

Run after `cargo build --release -p graphdec-py`, or after installing the
wheel built with `maturin build` from crates/python.
"""

import importlib.util
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    try:
        import graphdec_py

        return graphdec_py
    except ImportError:
        pass
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libgraphdec_py.so"
        if lib.exists():
            tmp = pathlib.Path(tempfile.mkdtemp()) / "graphdec_py.so"
            shutil.copy(lib, tmp)
            spec = importlib.util.spec_from_file_location("graphdec_py", tmp)
            mod = importlib.util.module_from_spec(spec)
            spec.loader.exec_module(mod)
            return mod
    sys.exit("graphdec_py not found; build it with cargo build --release -p graphdec-py")


def main():
    gd = load()

    l5 = gd.Digraph([(f"v{i}", f"v{j}") for i in range(5) for j in range(i + 1, 5)])
    n, m, _ = gd.modular_graph(l5)
    assert (n, m) == (6, 9), (n, m)
    assert len(gd.module_family(l5)) > 5

    c4 = gd.MultiGraph([("a", "0", "1"), ("b", "1", "2"), ("c", "2", "3"), ("d", "3", "0")])
    assert len(gd.two_isomorphic(c4)) == 3
    assert len(gd.two_isomorphic(c4, limit=1)) == 1
    dec = gd.tutte_decompose(c4, seed=3)
    assert [c["kind"] for c in dec["components"]] == ["cycle"], dec["components"]

    chain = gd.SDGraph(
        gd.Digraph([("a", "b"), ("b", "u"), ("v", "c"), ("u'", "c"), ("d", "v'"), ("u\"", "d"), ("v\"", "e")]),
        [("u", "v"), ("u'", "v'"), ("u\"", "v\"")],
    )
    assert chain.eval() == gd.Digraph([("a", "b"), ("b", "c"), ("d", "c")], vertices=["e"])

    c6 = gd.Digraph.undirected([(str(i), str((i + 1) % 6)) for i in range(6)])
    [sd] = gd.split_decompose_undirected(c6)
    assert sd.is_canonical() and sd.eval() == c6
    assert gd.split_decompose(c6) == gd.split_decompose(c6, seed=9)

    c4s = gd.Digraph.undirected([("0", "1"), ("1", "2"), ("2", "3"), ("3", "0")])
    assert gd.cliquewidth(c4s) == 2
    assert gd.cwd_witness(c4s, 1) is None
    assert gd.eval_expression(gd.cwd_witness(c4s, 2)) == c4s

    t = gd.TwoGraph([("a", "s", "x"), ("b", "x", "t"), ("c", "s", "t")], "s", "t")
    assert t.canonical_term() == "par(ser(e:a,e:b),e:c)", t.canonical_term()

    assert gd.mso_eval(c4s, "forall x exists y edg(x,y)")
    assert not gd.mso_eval(c4s, "edg(x,y)", elems=[("x", "0"), ("y", "2")])
    indep = gd.mso_define(c4s, "forall x (x in X -> forall y (edg(x,y) -> not y in X))", "X")
    assert len(indep) == 7

    try:
        gd.Digraph.from_edgelist("nonsense line")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed input accepted")
    big = gd.Digraph([(f"v{i}", f"v{i + 1}") for i in range(20)])
    try:
        gd.module_family(big)
    except gd.CapacityError:
        pass
    else:
        raise AssertionError("capacity not enforced")

    print("smoke test: PASS")


if __name__ == "__main__":
    main()
