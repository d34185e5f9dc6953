"""Smoke test for the pyobmf extension module.

Build and install it first, e.g. `pip install maturin && maturin build
--release -m crates/py/Cargo.toml && pip install target/wheels/pyobmf-*.whl`.
"""

import pyobmf


def main():
    tree = pyobmf.PqTree(4)
    tree.reduce([0, 1])
    tree.reduce([1, 2])
    assert tree.admits([0, 1, 2])
    assert not tree.admits([0, 2])
    print("tree", tree, "orders", len(tree.orders()))

    assert tree.best_set([3, -1, 2, -4]) == ([0, 1, 2], 4)

    d = pyobmf.gen_blocks(6, 20, 5)
    assert d.shape == (95, 95)
    for variant in ["plain", "cyclic", "sym", "cyclic-sym"]:
        f = pyobmf.factorize(d, 6, variant=variant)
        assert f.error == 0, (variant, f.error)
        assert f.is_valid()
        print(variant, "rank", f.rank_used, "error", f.error)

    noisy = pyobmf.flip_noise(d, 0.1, 7)
    assert pyobmf.hamming_error(d, noisy) == 903
    f = pyobmf.factorize(noisy, 6, variant="sym", seeds="sample:0.2", rng_seed=3)
    again = pyobmf.Factorization.parse(f.report())
    assert again.factors == f.factors
    svg = f.render("circular")
    assert svg.count('class="ribbon"') == f.rank_used
    print("noisy relerr", round(f.relative_error, 4))

    try:
        pyobmf.factorize(pyobmf.BinaryMatrix([[1, 0, 1]]), 1, variant="sym")
    except ValueError as e:
        print("rejected:", e)
    else:
        raise AssertionError("sym on a rectangle must fail")
    print("ok")


if __name__ == "__main__":
    main()
