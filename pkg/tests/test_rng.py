import numpy as np

from apsgames.rng import RandomSource, as_source


def test_same_seed_same_stream():
    a, b = RandomSource(5), RandomSource(5)
    assert np.array_equal(a.generator.random(10), b.generator.random(10))


def test_spawned_streams_differ_and_are_reproducible():
    root = RandomSource(5)
    x = root.spawn(0).generator.random(5)
    y = root.spawn(1).generator.random(5)
    assert not np.array_equal(x, y)
    assert np.array_equal(x, RandomSource(5, (0,)).generator.random(5))


def test_spawn_does_not_advance_parent():
    a, b = RandomSource(3), RandomSource(3)
    a.spawn(7)
    assert a.generator.random() == b.generator.random()


def test_draw_counter():
    rs = RandomSource(0)
    rs.count(3)
    rs.count()
    assert rs.draws == 4


def test_as_source():
    rs = RandomSource(9)
    assert as_source(rs) is rs
    assert as_source(4).seed == 4
    assert as_source(None).seed == 0
