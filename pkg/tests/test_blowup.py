import numpy as np
import pytest

from atomgames.kernel import UsageError
from atomgames.blowup import (
    blow_up,
    load_blowup_map,
    save_blowup_map,
    theta_embed,
)
from atomgames.rainbow import blown_rainbow, finite_rainbow, single_reds


@pytest.fixture(scope="module")
def small_blowup():
    return blow_up(finite_rainbow(3, 2, 2), 2, build_structure=False)


def test_degenerate_blowup_is_isomorphic():
    _, bm = blow_up(finite_rainbow(3, 2, 2), 1, build_structure=False)
    assert bm.target.n_atoms == bm.source.n_atoms
    counts = bm.copy_counts()
    assert counts.min() == counts.max() == 1
    _, rep = theta_embed(bm)
    assert rep.ok, rep.summary()


def test_copy_counts_follow_red_edges(small_blowup):
    _, bm = small_blowup
    assert bm.source.n_atoms == 17301
    assert bm.target.n_atoms == 37677  # frozen
    counts = bm.copy_counts()
    reds = bm.red_edge_counts()
    assert np.array_equal(counts, 2 ** reds.astype(np.int64))
    # non-red atoms keep a single copy...
    assert (counts[reds == 0] == 1).all()
    # ...and those copies are the atoms themselves, superscripts aside
    a = int(np.flatnonzero(reds == 0)[0])
    t = int(bm.copies(a)[0])
    assert np.array_equal(bm.source.yellows[a], bm.target.yellows[t])


def test_one_red_edge_times_T():
    _, bm = blow_up(finite_rainbow(3, 2, 2), 3, build_structure=False)
    reds = bm.red_edge_counts()
    counts = bm.copy_counts()
    assert (counts[reds == 1] == 3).all()
    assert bm.target.n_atoms == 65733  # frozen


def test_diagonal_atoms_count_block_edges(small_blowup):
    # an atom identifying two nodes stores its one red block edge in two
    # node-pair columns; the copy count must still be T^1
    from atomgames.rainbow_enum import SENT_SAME

    _, bm = small_blowup
    has_diag = (bm.source.edges == SENT_SAME).any(axis=1)
    one_red = bm.red_edge_counts() == 1
    sel = np.flatnonzero(has_diag & one_red)
    assert len(sel) and (bm.copy_counts()[sel] == 2).all()


def test_theta_report_small(small_blowup):
    _, bm = small_blowup
    theta, rep = theta_embed(bm)
    assert rep.ok, rep.summary()
    names = [n for n, _, _ in rep.entries]
    assert "injective" in names
    assert "preserves-c0-all-elements" in names
    assert any("truncated" in n for n in rep.notices)
    # spot-check the map itself on a singleton
    mask = np.zeros(bm.source.n_atoms, dtype=bool)
    mask[0] = True
    img = theta(mask)
    assert set(np.flatnonzero(img)) == set(bm.copies(0))


def test_theta_detects_tampering(small_blowup):
    from atomgames.blowup import BlowupMap, _cyl_preserved

    _, bm = small_blowup
    src_of = bm.src_of.copy()
    a, b = 0, bm.source.n_atoms - 1
    t = int(bm.copies(a)[0])
    src_of[t] = b  # misattach one copy
    bad = BlowupMap(bm.source, bm.target, src_of, bm.T)
    assert not all(_cyl_preserved(bad, i)[0] for i in range(3))


def test_structure_output():
    tgt, bm = blow_up(finite_rainbow(3, 2, 2), 1)
    assert tgt.n_atoms == bm.target.n_atoms
    assert tgt.dimension == 3


def test_serialization_roundtrip(tmp_path, small_blowup):
    _, bm = small_blowup
    p = str(tmp_path / "bm.npz")
    save_blowup_map(bm, p)
    bm2 = load_blowup_map(p)
    assert bm2.T == bm.T
    assert np.array_equal(bm2.src_of, bm.src_of)
    assert np.array_equal(bm2.target.edges, bm.target.edges)
    _, rep = theta_embed(bm2)
    assert rep.ok


def test_input_validation():
    with pytest.raises(UsageError):
        blow_up(finite_rainbow(3, 2, 2), 0)
    with pytest.raises(UsageError):
        blow_up(single_reds(3, 2, 2), 2)
    with pytest.raises(UsageError):
        blow_up(blown_rainbow(3, 2, 2, 2), 2)  # already blown
