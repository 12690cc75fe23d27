"""A fixed list of small functors used by sweeps and tests."""

from .functor import Const, Dual, Exp, Id, Low, Prod, Sum, Up, functor_depth, normalize_dual
from .poset import chain, discrete, one

TWO = chain(2, "Two")
D2 = discrete(["a", "b"], name="D2")
ONE = one()

CATALOGUE = [
    ("id", Id()),
    ("const", Const(TWO)),
    ("two*id", Prod(Const(TWO), Id())),
    ("id*id", Prod(Id(), Id())),
    ("id+1", Sum(Id(), Const(ONE))),
    ("id^two", Exp(Id(), TWO)),
    ("(id*two)^d2", Exp(Prod(Id(), Const(TWO)), D2)),
    ("low", Low(Id())),
    ("up", Up(Id())),
    ("dual(two*id)", normalize_dual(Dual(Prod(Const(TWO), Id())))),
    ("dual(id^two)", normalize_dual(Dual(Exp(Id(), TWO)))),
    ("dual(low)", normalize_dual(Dual(Low(Id())))),
    ("low(id+1)", Low(Sum(Id(), Const(ONE)))),
    ("up(two*id)", Up(Prod(Const(TWO), Id()))),
]

assert all(functor_depth(f) <= 2 for _, f in CATALOGUE)
