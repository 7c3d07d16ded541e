import pathlib

import pytest

from hpa.algebra import congruence_closure, free_algebra
from hpa.dsl import parse_quiver
from hpa.quiver import enumerate_paths, linear_quiver

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / 'fixtures'


def load_algebra(name):
    q, rels = parse_quiver((FIXTURES / name).read_text())
    return congruence_closure(enumerate_paths(q), rels)


@pytest.fixture(scope='session')
def p2():
    return load_algebra('p2.quiver')


@pytest.fixture(scope='session')
def f3():
    return load_algebra('f3.quiver')


@pytest.fixture(scope='session')
def f1():
    return load_algebra('f1.quiver')


@pytest.fixture(scope='session')
def p113():
    return load_algebra('p113.quiver')


@pytest.fixture(scope='session')
def a3a3():
    from hpa.algebra import tensor
    return tensor(free_algebra(linear_quiver(3)),
                  free_algebra(linear_quiver(3, vertex_prefix='w',
                                             arrow_prefix='b')))
