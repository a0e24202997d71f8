"""Models: where expressions evaluate.

Three models ship with the package. FreeIdagModel interprets every generator
as a small idag and composes with concat/juxt; it is free, so two expressions
are equal modulo the equational theory iff their images here are isomorphic.
MatrixModel interprets wires as coordinates and morphisms as matrices over
the weight system (an (n, m) morphism is an n x m matrix; sequential
composition is matrix product with rows indexed by inputs, tensor is block
diagonal). LoopsModel interprets only wires, crossings and boxes: a morphism
is a permutation together with one label word per input, composition
composing permutations and concatenating words.

Matrix arithmetic is backed by numpy int64 arrays. That is exact for the
integer magnitudes this package works at; BOOL products are computed as
ordinary products and clipped to {0, 1}, which agrees with the saturating
semiring because BOOL matrices have no negative entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from . import core
from .core import Idag, In, NodeRef, Out, canonical_form
from .errors import (
    InterfaceMismatch,
    InvalidWeight,
    ModeMismatch,
    NotBijective,
    UnsupportedGenerator,
)
from .terms import (
    Anti,
    Delta,
    Eps,
    Eta,
    Expression,
    Id,
    Nabla,
    Node,
    Sym,
    arity_of,
    fold,
)
from .weights import BOOL, NAT, WeightSystem


def _as_array(rows: Sequence[Sequence[int]], n: int, m: int) -> np.ndarray:
    arr = np.zeros((n, m), dtype=np.int64)
    if n and m:
        arr[:, :] = np.asarray(rows, dtype=np.int64).reshape(n, m)
    return arr


@dataclass(frozen=True)
class MatrixMorphism:
    """An (n_in, n_out) morphism of the matrix model: an n_in x n_out integer
    matrix over a weight system. Treat instances as immutable."""

    weights: WeightSystem
    array: np.ndarray

    @property
    def n_in(self) -> int:
        return self.array.shape[0]

    @property
    def n_out(self) -> int:
        return self.array.shape[1]

    @property
    def entries(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(x) for x in row) for row in self.array)

    def then(self, other: "MatrixMorphism") -> "MatrixMorphism":
        if self.weights is not other.weights:
            raise ModeMismatch(f"{self.weights!r} vs {other.weights!r}")
        if self.n_out != other.n_in:
            raise InterfaceMismatch(
                f"cannot feed {self.n_out} outputs into {other.n_in} inputs"
            )
        prod = self.array @ other.array
        if self.weights is BOOL:
            prod = (prod != 0).astype(np.int64)
        return MatrixMorphism(self.weights, prod)

    def tensor(self, other: "MatrixMorphism") -> "MatrixMorphism":
        if self.weights is not other.weights:
            raise ModeMismatch(f"{self.weights!r} vs {other.weights!r}")
        a, b = self.array, other.array
        out = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=np.int64)
        out[: a.shape[0], : a.shape[1]] = a
        out[a.shape[0] :, a.shape[1] :] = b
        return MatrixMorphism(self.weights, out)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatrixMorphism):
            return NotImplemented
        return (
            self.weights is other.weights
            and self.array.shape == other.array.shape
            and bool(np.array_equal(self.array, other.array))
        )

    def __hash__(self) -> int:
        return hash((self.weights, self.array.shape, self.entries))

    def __repr__(self) -> str:
        return f"MatrixMorphism({self.weights!r}, {self.entries!r})"

    def to_json_obj(self) -> dict:
        return {
            "mode": self.weights.name,
            "inputs": self.n_in,
            "outputs": self.n_out,
            "entries": [list(row) for row in self.entries],
        }


def matrix(
    rows: Sequence[Sequence[int]],
    weights: WeightSystem,
    n: Optional[int] = None,
    m: Optional[int] = None,
) -> MatrixMorphism:
    """Build and validate an n x m matrix morphism from nested rows.

    The shape defaults to the shape of rows; pass n and m explicitly when
    rows cannot determine it (no rows, or rows of width zero)."""
    if n is None:
        n = len(rows)
    if m is None:
        if not rows:
            raise InvalidWeight("cannot infer the output arity of an empty matrix")
        m = len(rows[0])
    mor = MatrixMorphism(weights, _as_array(rows, n, m))
    for row in mor.entries:
        for x in row:
            weights.check_value(x)
    return mor


def matrix_identity(n: int, weights: WeightSystem) -> MatrixMorphism:
    return MatrixMorphism(weights, np.eye(n, dtype=np.int64))


def matrix_permutation(perm: Sequence[int], weights: WeightSystem) -> MatrixMorphism:
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise NotBijective(f"{list(perm)!r} is not a permutation")
    arr = np.zeros((n, n), dtype=np.int64)
    for i, j in enumerate(perm):
        arr[i, j] = 1
    return MatrixMorphism(weights, arr)


@dataclass(frozen=True)
class LoopsMorphism:
    """A morphism of the loops model: a permutation of the wires plus one
    label word per input wire. Composition multiplies permutations and
    prepends the later word (so sequential boxes accumulate on the left)."""

    perm: tuple[int, ...]
    words: tuple[tuple[str, ...], ...]

    @property
    def n(self) -> int:
        return len(self.perm)

    def then(self, other: "LoopsMorphism") -> "LoopsMorphism":
        if self.n != other.n:
            raise InterfaceMismatch(f"cannot feed {self.n} wires into {other.n}")
        perm = tuple(other.perm[self.perm[i]] for i in range(self.n))
        words = tuple(other.words[self.perm[i]] + self.words[i] for i in range(self.n))
        return LoopsMorphism(perm, words)

    def tensor(self, other: "LoopsMorphism") -> "LoopsMorphism":
        n = self.n
        perm = self.perm + tuple(n + p for p in other.perm)
        return LoopsMorphism(perm, self.words + other.words)


def loops_identity(n: int) -> LoopsMorphism:
    return LoopsMorphism(tuple(range(n)), ((),) * n)


# ---------------------------------------------------------------------------
# Generator images in the free model


def free_generator_image(gen: Expression, mode: WeightSystem) -> Idag:
    """The idag a single generator evaluates to in the free model."""
    if isinstance(gen, Eta):
        return Idag(mode, 0, 1, (), core._attach({}))
    if isinstance(gen, Nabla):
        return Idag(
            mode, 2, 1, (), core._attach({(In(0), Out(0)): 1, (In(1), Out(0)): 1})
        )
    if isinstance(gen, Eps):
        return Idag(mode, 1, 0, (), core._attach({}))
    if isinstance(gen, Delta):
        return Idag(
            mode, 1, 2, (), core._attach({(In(0), Out(0)): 1, (In(0), Out(1)): 1})
        )
    if isinstance(gen, Node):
        return Idag(
            mode,
            1,
            1,
            (("p", gen.label),),
            core._attach({(In(0), NodeRef("p")): 1, (NodeRef("p"), Out(0)): 1}),
        )
    if isinstance(gen, Anti):
        if not mode.antipode_enabled:
            raise UnsupportedGenerator(f"anti requires int mode, not {mode!r}")
        return Idag(mode, 1, 1, (), core._attach({(In(0), Out(0)): -1}))
    raise UnsupportedGenerator(f"no free image for {gen!r}")


# ---------------------------------------------------------------------------
# Models


class Model:
    """Evaluation target: images for generators plus PROP structure."""

    def identity(self, n: int):
        raise NotImplementedError

    def symmetry(self, n: int, m: int):
        raise NotImplementedError

    def generator(self, gen: Expression):
        raise NotImplementedError

    def compose(self, first, then):
        """Diagrammatic order: first, then then."""
        raise NotImplementedError

    def tensor(self, a, b):
        raise NotImplementedError

    def relation(self, mat: MatrixMorphism):
        """The morphism a plain weight matrix denotes in this model."""
        raise NotImplementedError

    def equal(self, a, b) -> bool:
        raise NotImplementedError


@dataclass(frozen=True)
class FreeIdagModel(Model):
    """Evaluation into idags themselves; free for the equational theory the
    mode selects."""

    mode: WeightSystem = BOOL

    def identity(self, n: int) -> Idag:
        return core.identity(n, self.mode)

    def symmetry(self, n: int, m: int) -> Idag:
        return core.symmetry(n, m, self.mode)

    def generator(self, gen: Expression) -> Idag:
        return free_generator_image(gen, self.mode)

    def compose(self, first: Idag, then: Idag) -> Idag:
        return core.concat(then, first)

    def tensor(self, a: Idag, b: Idag) -> Idag:
        return core.juxt(a, b)

    def relation(self, mat: MatrixMorphism) -> Idag:
        edges: dict = {}
        for i, row in enumerate(mat.entries):
            for j, w in enumerate(row):
                if w:
                    self.mode.check_edge_weight(w)
                    edges[(In(i), Out(j))] = w
        return Idag(self.mode, mat.n_in, mat.n_out, (), core._attach(edges))

    def equal(self, a: Idag, b: Idag) -> bool:
        return canonical_form(a) == canonical_form(b)


@dataclass(frozen=True)
class MatrixModel(Model):
    """Evaluation into weight matrices. lambda_images supplies a 1 x 1 matrix
    per node label; unlisted labels act as the identity wire."""

    weights: WeightSystem = NAT
    lambda_images: Mapping[str, Union[int, MatrixMorphism]] = field(default_factory=dict)

    def _lambda(self, label: str) -> MatrixMorphism:
        img = self.lambda_images.get(label)
        if img is None:
            return matrix_identity(1, self.weights)
        if isinstance(img, MatrixMorphism):
            if img.weights is not self.weights:
                raise ModeMismatch(
                    f"lambda image for {label!r}: {img.weights!r} vs {self.weights!r}"
                )
            if img.array.shape != (1, 1):
                raise InterfaceMismatch(f"lambda image for {label!r} must be 1x1")
            return img
        self.weights.check_value(img)
        return matrix([[img]], self.weights, 1, 1)

    def identity(self, n: int) -> MatrixMorphism:
        return matrix_identity(n, self.weights)

    def symmetry(self, n: int, m: int) -> MatrixMorphism:
        perm = [m + i for i in range(n)] + list(range(m))
        return matrix_permutation(perm, self.weights)

    def generator(self, gen: Expression) -> MatrixMorphism:
        if isinstance(gen, Eta):
            return MatrixMorphism(self.weights, np.zeros((0, 1), dtype=np.int64))
        if isinstance(gen, Nabla):
            return matrix([[1], [1]], self.weights, 2, 1)
        if isinstance(gen, Eps):
            return MatrixMorphism(self.weights, np.zeros((1, 0), dtype=np.int64))
        if isinstance(gen, Delta):
            return matrix([[1, 1]], self.weights, 1, 2)
        if isinstance(gen, Node):
            return self._lambda(gen.label)
        if isinstance(gen, Anti):
            if not self.weights.antipode_enabled:
                raise UnsupportedGenerator(
                    f"anti requires int mode, not {self.weights!r}"
                )
            return matrix([[-1]], self.weights, 1, 1)
        raise UnsupportedGenerator(f"no matrix image for {gen!r}")

    def compose(self, first: MatrixMorphism, then: MatrixMorphism) -> MatrixMorphism:
        return first.then(then)

    def tensor(self, a: MatrixMorphism, b: MatrixMorphism) -> MatrixMorphism:
        return a.tensor(b)

    def relation(self, mat: MatrixMorphism) -> MatrixMorphism:
        for row in mat.entries:
            for x in row:
                self.weights.check_value(x)
        return MatrixMorphism(self.weights, mat.array)

    def equal(self, a: MatrixMorphism, b: MatrixMorphism) -> bool:
        return a == b


@dataclass(frozen=True)
class LoopsModel(Model):
    """Evaluation into permutations-with-words; supports only wires,
    crossings and node boxes."""

    def identity(self, n: int) -> LoopsMorphism:
        return loops_identity(n)

    def symmetry(self, n: int, m: int) -> LoopsMorphism:
        perm = tuple([m + i for i in range(n)] + list(range(m)))
        return LoopsMorphism(perm, ((),) * (n + m))

    def generator(self, gen: Expression) -> LoopsMorphism:
        if isinstance(gen, Node):
            return LoopsMorphism((0,), ((gen.label,),))
        raise UnsupportedGenerator(f"loops model does not interpret {gen!r}")

    def compose(self, first: LoopsMorphism, then: LoopsMorphism) -> LoopsMorphism:
        return first.then(then)

    def tensor(self, a: LoopsMorphism, b: LoopsMorphism) -> LoopsMorphism:
        return a.tensor(b)

    def relation(self, mat: MatrixMorphism) -> LoopsMorphism:
        n, m = mat.n_in, mat.n_out
        if n != m:
            raise UnsupportedGenerator("loops model interprets only permutations")
        perm = []
        for i, row in enumerate(mat.entries):
            ones = [j for j, w in enumerate(row) if w]
            if len(ones) != 1 or row[ones[0]] != 1:
                raise UnsupportedGenerator("loops model interprets only permutations")
            perm.append(ones[0])
        if sorted(perm) != list(range(n)):
            raise UnsupportedGenerator("loops model interprets only permutations")
        return LoopsMorphism(tuple(perm), ((),) * n)

    def equal(self, a: LoopsMorphism, b: LoopsMorphism) -> bool:
        return a == b


def evaluate(e: Expression, model: Model):
    """Evaluate a well-typed expression in a model.

    Raises TypeMismatch if e is ill-typed and UnsupportedGenerator if the
    model lacks an image for a generator occurring in e.
    """
    arity_of(e)

    def atom(a: Expression):
        if isinstance(a, Id):
            return model.identity(a.n)
        if isinstance(a, Sym):
            return model.symmetry(a.n, a.m)
        return model.generator(a)

    return fold(
        e,
        atom,
        lambda _n, a, b: model.compose(a, b),
        lambda _n, a, b: model.tensor(a, b),
    )


def loops_eval(e: Expression) -> LoopsMorphism:
    """Evaluate a node/sym/id expression in the loops model."""
    return evaluate(e, LoopsModel())
