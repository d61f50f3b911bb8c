"""Root data (X, Phi, Y, Phi^vee), full root systems, and the Weyl group
acting on the cocharacter lattice Y and on roots.

Conventions:
  * the pairing X x Y -> Z is the coordinate sum <x, y> = sum_i x_i y_i;
  * cartan[i][j] = <alpha_j, alpha_i^vee>, so row i collects the pairings
    against the i-th simple coroot;
  * roots are indexed 1-based, positives first (sorted by height, then by
    descending coefficient tuple, so root i is simple root alpha_i for
    i = 1..n), with the negative of root i at index i + #positives;
  * E-series nodes follow the numbering with node 2 attached to node 4.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .intlinalg import DimensionMismatch, IntMatrix

ROOT_CAP = 10_000


class InvalidCartan(Exception):
    """Raised when matrices do not define a valid finite-type Cartan matrix."""


class NonFiniteSystem(Exception):
    """Raised when reflection closure exceeds the root cap (invalid input)."""


class BadIndex(Exception):
    """Raised when a root index is out of range."""


def cartan_matrix(letter: str, n: int) -> IntMatrix:
    """Standard Cartan matrix of an irreducible type, cartan[i][j] = <a_j, a_i`>."""
    letter = letter.upper()
    c = [[2 * (i == j) for j in range(n)] for i in range(n)]

    def edge(i, j, cij=-1, cji=-1):
        c[i][j] = cij
        c[j][i] = cji

    if letter == "A" and n >= 1:
        for i in range(n - 1):
            edge(i, i + 1)
    elif letter == "B" and n >= 2:
        for i in range(n - 2):
            edge(i, i + 1)
        edge(n - 2, n - 1, -1, -2)  # alpha_n short
    elif letter == "C" and n >= 2:
        for i in range(n - 2):
            edge(i, i + 1)
        edge(n - 2, n - 1, -2, -1)  # alpha_n long
    elif letter == "D" and n >= 3:
        for i in range(n - 2):
            edge(i, i + 1)
        edge(n - 3, n - 1)
    elif letter == "E" and n in (6, 7, 8):
        for i, j in [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4), (6, 7), (7, 8)][: n - 1]:
            edge(i - 1, j - 1)
    elif letter == "F" and n == 4:
        edge(0, 1)
        edge(1, 2, -1, -2)  # alpha_3, alpha_4 short
        edge(2, 3)
    elif letter == "G" and n == 2:
        edge(0, 1, -3, -1)  # alpha_1 short
    else:
        raise InvalidCartan(f"unsupported type {letter}{n}")
    return IntMatrix(tuple(map(tuple, c)))


def validate_cartan(c: IntMatrix) -> None:
    """Check the Cartan matrix axioms; raise InvalidCartan on violation."""
    n = c.rows
    if c.cols != n:
        raise InvalidCartan("Cartan matrix must be square")
    for i in range(n):
        if c.entries[i][i] != 2:
            raise InvalidCartan(f"diagonal entry {c.entries[i][i]} != 2 at {i}")
        for j in range(n):
            if i != j:
                if c.entries[i][j] > 0:
                    raise InvalidCartan(f"positive off-diagonal entry at ({i},{j})")
                if (c.entries[i][j] == 0) != (c.entries[j][i] == 0):
                    raise InvalidCartan(f"asymmetric zero pattern at ({i},{j})")


def _components(c: IntMatrix) -> list[list[int]]:
    """Connected components of the Cartan graph, each sorted, in order of
    smallest node."""
    n = c.rows
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        comp, stack = [], [start]
        seen[start] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and c.entries[i][j] != 0:
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def _classify_block(c: IntMatrix, nodes: list[int]) -> str:
    """Type label of one connected Cartan block (node set of c), e.g. 'B3'."""
    k = len(nodes)
    if k == 1:
        return "A1"
    adj = {i: [j for j in nodes if j != i and c.entries[i][j] != 0] for i in nodes}
    weights = {(i, j): c.entries[i][j] * c.entries[j][i]
               for i in nodes for j in adj[i] if i < j}
    if any(len(adj[i]) > 3 for i in nodes):
        raise InvalidCartan("node of degree > 3")
    multi = [(e, w) for e, w in weights.items() if w > 1]
    if not multi:
        branch = [i for i in nodes if len(adj[i]) == 3]
        if len(branch) > 1:
            raise InvalidCartan("more than one branch node")
        if not branch:
            return f"A{k}"
        arms = sorted(_arm_lengths(adj, branch[0]))
        if arms[:2] == [1, 1]:
            return f"D{k}"
        if arms == [1, 2, k - 4] and k in (6, 7, 8):
            return f"E{k}"
        raise InvalidCartan(f"branch arms {arms} are not of finite type")
    if len(multi) > 1:
        raise InvalidCartan("more than one multiple bond")
    (i, j), w = multi[0]
    if any(len(adj[x]) == 3 for x in nodes):
        raise InvalidCartan("multiple bond with a branch node")
    if w == 3:
        if k != 2:
            raise InvalidCartan("triple bond outside rank 2")
        return "G2"
    if w != 2:
        raise InvalidCartan(f"bond weight {w}")
    if k == 2:
        return "B2"
    # the row holding the -2 belongs to the short root
    short = i if c.entries[i][j] == -2 else j
    longr = j if short == i else i
    if len(adj[short]) == 1 and len(adj[longr]) == 1:
        raise InvalidCartan("disconnected double bond")
    if len(adj[short]) == 1:
        return f"B{k}"
    if len(adj[longr]) == 1:
        return f"C{k}"
    if k == 4 and all(len(adj[x]) <= 2 for x in nodes):
        return "F4"
    raise InvalidCartan("double bond placement is not of finite type")


def _arm_lengths(adj: dict[int, list[int]], branch: int) -> list[int]:
    arms = []
    for start in adj[branch]:
        length, prev, cur = 1, branch, start
        while True:
            nxt = [x for x in adj[cur] if x != prev]
            if not nxt:
                break
            if len(nxt) > 1:
                raise InvalidCartan("nested branch nodes")
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    return arms


def _normalize_label(label: str) -> str:
    # B2 and C2 share a Cartan matrix
    return "x".join("B2" if p == "C2" else p for p in label.split("x"))


def classify_cartan(c: IntMatrix) -> tuple[str, tuple[tuple[int, ...], ...]]:
    """(type label, components) of a valid Cartan matrix; components are
    0-based node tuples. Product labels sort components by descending rank,
    then letter, e.g. 'A2xA1'."""
    validate_cartan(c)
    comps = _components(c)
    labels = [(_classify_block(c, comp), tuple(comp)) for comp in comps]
    labels.sort(key=lambda t: (-int(t[0][1:]), t[0][0], t[1]))
    return "x".join(lab for lab, _ in labels), tuple(comp for _, comp in labels)


_WEYL_ORDERS = {
    "A": lambda n: _factorial(n + 1),
    "B": lambda n: 2 ** n * _factorial(n),
    "C": lambda n: 2 ** n * _factorial(n),
    "D": lambda n: 2 ** (n - 1) * _factorial(n),
    "E": lambda n: {6: 51840, 7: 2903040, 8: 696729600}[n],
    "F": lambda n: 1152,
    "G": lambda n: 12,
}


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def weyl_order(type_label: str) -> int:
    """Order of the Weyl group of a (possibly product) type label."""
    out = 1
    for part in type_label.split("x"):
        if part:
            out *= _WEYL_ORDERS[part[0]](int(part[1:]))
    return out


@dataclass(frozen=True)
class Root:
    """One root: 1-based index, X-vector, coroot Y-vector, and coordinates in
    the simple (co)root bases."""

    index: int
    x_vector: tuple[int, ...]
    coroot: tuple[int, ...]
    coeffs: tuple[int, ...]
    coroot_coeffs: tuple[int, ...]

    @property
    def height(self) -> int:
        return sum(self.coeffs)

    @property
    def is_positive(self) -> bool:
        return self.height > 0


@dataclass(frozen=True)
class WeylElement:
    """Weyl group element: a word in simple reflections (1-based letters), the
    induced permutation of the root list (0-based positions), and the matrix
    of the action on Y. Equality and hashing use root_perm only: the
    permutation determines the element."""

    word: tuple[int, ...]
    root_perm: tuple[int, ...]
    y_matrix: IntMatrix

    def __eq__(self, other) -> bool:
        return isinstance(other, WeylElement) and self.root_perm == other.root_perm

    def __hash__(self) -> int:
        return hash(self.root_perm)

    @property
    def length(self) -> int:
        return len(self.word)


class RootDatum:
    """Root datum with simple roots R (rows, X-basis), simple coroots C
    (rows, Y-basis), the full root list, and the simple reflections."""

    def __init__(self, type_label: str, isogeny: str,
                 simple_roots: IntMatrix, simple_coroots: IntMatrix):
        if simple_roots.rows != simple_coroots.rows or simple_roots.cols != simple_coroots.cols:
            raise DimensionMismatch("simple root and coroot matrices differ in shape")
        self.type_label = type_label
        self.isogeny = isogeny
        self.simple_roots = simple_roots
        self.simple_coroots = simple_coroots
        self.n = simple_roots.rows
        self.rank = simple_roots.cols
        cartan = tuple(tuple(sum(a * b for a, b in zip(simple_roots.row(j), simple_coroots.row(i)))
                             for j in range(self.n)) for i in range(self.n))
        self.cartan = IntMatrix(cartan)
        validate_cartan(self.cartan)
        expected, comps = classify_cartan(self.cartan)
        if _normalize_label(expected) != _normalize_label(type_label):
            raise InvalidCartan(f"matrices define type {expected}, not {type_label}")
        self.components = comps
        self.roots = generate_roots(self)
        self.num_positive = len(self.roots) // 2
        self._pos_by_x = {rt.x_vector: i for i, rt in enumerate(self.roots)}
        self.weyl_gens = tuple(make_weyl(self, (i,)) for i in range(1, self.n + 1))
        self.weyl_size = weyl_order(type_label)

    def root(self, index: int) -> Root:
        """Root by 1-based index."""
        if not 1 <= index <= len(self.roots):
            raise BadIndex(f"root index {index} out of range 1..{len(self.roots)}")
        return self.roots[index - 1]

    def position_of_x(self, x_vector: Sequence[int]) -> int:
        pos = self._pos_by_x.get(tuple(x_vector))
        if pos is None:
            raise BadIndex(f"{tuple(x_vector)} is not a root")
        return pos

    def __eq__(self, other) -> bool:
        return (isinstance(other, RootDatum)
                and self.type_label == other.type_label
                and self.isogeny == other.isogeny
                and self.simple_roots == other.simple_roots
                and self.simple_coroots == other.simple_coroots)

    def __hash__(self) -> int:
        return hash((self.type_label, self.isogeny, self.simple_roots, self.simple_coroots))

    def __repr__(self) -> str:
        return f"RootDatum({self.type_label}, {self.isogeny}, rank {self.rank})"


def build_datum(type_label: str | None = None, isogeny: str = "adjoint",
                simple_roots=None, simple_coroots=None) -> RootDatum:
    """Build a root datum.

    isogeny 'adjoint': X is spanned by the simple roots (R = identity,
    C = Cartan rows). isogeny 'simply_connected': Y is spanned by the simple
    coroots (C = identity, R = rows of the transposed Cartan). isogeny
    'explicit': simple_roots and simple_coroots are stored verbatim;
    type_label, when omitted, is derived from the resulting Cartan matrix.
    """
    if isogeny == "explicit":
        if simple_roots is None or simple_coroots is None:
            raise InvalidCartan("explicit isogeny requires simple_roots and simple_coroots")
        r_mat = simple_roots if isinstance(simple_roots, IntMatrix) else IntMatrix(tuple(map(tuple, simple_roots)))
        c_mat = simple_coroots if isinstance(simple_coroots, IntMatrix) else IntMatrix(tuple(map(tuple, simple_coroots)))
        cartan = tuple(tuple(sum(a * b for a, b in zip(r_mat.row(j), c_mat.row(i)))
                             for j in range(r_mat.rows)) for i in range(c_mat.rows))
        derived, _ = classify_cartan(IntMatrix(cartan))
        if type_label is None:
            type_label = derived
        elif type_label != derived:
            raise InvalidCartan(f"matrices define type {derived}, not {type_label}")
        return RootDatum(type_label, "explicit", r_mat, c_mat)
    if type_label is None:
        raise InvalidCartan("type label required for adjoint or simply connected data")
    parts = type_label.split("x")
    if len(parts) != 1:
        raise InvalidCartan(f"only irreducible types can be built by label, got {type_label}")
    letter, n = type_label[0].upper(), int(type_label[1:])
    cartan = cartan_matrix(letter, n)
    if isogeny == "adjoint":
        return RootDatum(f"{letter}{n}", "adjoint", IntMatrix.identity(n), cartan)
    if isogeny == "simply_connected":
        return RootDatum(f"{letter}{n}", "simply_connected", cartan.transpose(), IntMatrix.identity(n))
    raise InvalidCartan(f"unknown isogeny {isogeny!r}")


def generate_roots(rd: RootDatum) -> tuple[Root, ...]:
    """All roots by closure under simple reflections, positives sorted by
    (height, descending coefficient tuple), negatives mirrored after them."""
    cartan = rd.cartan.entries
    n = rd.n
    # BFS on (root coeffs, coroot coeffs) pairs
    start = {tuple(int(i == k) for i in range(n)): tuple(int(i == k) for i in range(n))
             for k in range(n)}
    frontier = list(start)
    found = dict(start)
    while frontier:
        fresh = []
        for c in frontier:
            d = found[c]
            for i in range(n):
                pair_c = sum(cartan[i][j] * c[j] for j in range(n))
                ci = tuple(x - pair_c * (j == i) for j, x in enumerate(c))
                if ci not in found:
                    pair_d = sum(cartan[j][i] * d[j] for j in range(n))
                    found[ci] = tuple(x - pair_d * (j == i) for j, x in enumerate(d))
                    fresh.append(ci)
            if len(found) > ROOT_CAP:
                raise NonFiniteSystem(f"closure exceeded {ROOT_CAP} roots")
        frontier = fresh
    positives = sorted((c for c in found if sum(c) > 0),
                       key=lambda c: (sum(c), tuple(-x for x in c)))
    ordered = positives + [tuple(-x for x in c) for c in positives]
    roots = []
    for pos, c in enumerate(ordered):
        d = found[c]
        x_vec = tuple(sum(c[i] * rd.simple_roots.entries[i][j] for i in range(n))
                      for j in range(rd.rank))
        y_vec = tuple(sum(d[i] * rd.simple_coroots.entries[i][j] for i in range(n))
                      for j in range(rd.rank))
        roots.append(Root(pos + 1, x_vec, y_vec, c, d))
    return tuple(roots)


def _gen_y_matrix(rd: RootDatum, i: int) -> IntMatrix:
    # s_i on Y: v -> v - (R_i . v) C_i
    r_i = rd.simple_roots.row(i - 1)
    c_i = rd.simple_coroots.row(i - 1)
    return IntMatrix(tuple(tuple((a == b) - c_i[a] * r_i[b] for b in range(rd.rank))
                           for a in range(rd.rank)))


def make_weyl(rd: RootDatum, word: Iterable[int]) -> WeylElement:
    """Weyl element from a word in 1-based simple-reflection letters."""
    word = tuple(word)
    r = rd.rank
    y = IntMatrix.identity(r)
    x = IntMatrix.identity(r)
    for i in word:
        if not 1 <= i <= rd.n:
            raise BadIndex(f"simple reflection index {i} out of range 1..{rd.n}")
        b = _gen_y_matrix(rd, i)
        y = y @ b
        x = x @ b.transpose()
    perm = tuple(rd.position_of_x(x.apply(rt.x_vector)) for rt in rd.roots)
    return WeylElement(word, perm, y)


def identity_weyl(rd: RootDatum) -> WeylElement:
    return WeylElement((), tuple(range(len(rd.roots))), IntMatrix.identity(rd.rank))


def multiply(a: WeylElement, b: WeylElement) -> WeylElement:
    """Composition a∘b (b acts first)."""
    perm = tuple(a.root_perm[p] for p in b.root_perm)
    return WeylElement(a.word + b.word, perm, a.y_matrix @ b.y_matrix)


def inverse(w: WeylElement) -> WeylElement:
    perm = [0] * len(w.root_perm)
    for i, p in enumerate(w.root_perm):
        perm[p] = i
    return WeylElement(tuple(reversed(w.word)), tuple(perm), w.y_matrix.inverse_unimodular())


def weyl_consistent(rd: RootDatum, w: WeylElement) -> bool:
    """Check that root_perm matches both the X-action on roots and the
    Y-action on coroots, and that y_matrix is the word's reflection product."""
    from_word = make_weyl(rd, w.word)
    if from_word.root_perm != w.root_perm or from_word.y_matrix != w.y_matrix:
        return False
    for rt, image in zip(rd.roots, w.root_perm):
        if w.y_matrix.apply(rt.coroot) != rd.roots[image].coroot:
            return False
    return True


def weyl_apply(w: WeylElement, v: Sequence) -> tuple:
    """Apply the Y-action of w to a vector with int or Fraction entries."""
    return w.y_matrix.apply(v)


def reflection_element(rd: RootDatum, root_index: int) -> WeylElement:
    """The reflection in an arbitrary root, as a Weyl element with a word."""
    rt = rd.root(root_index)
    perm = []
    for other in rd.roots:
        pairing = sum(a * b for a, b in zip(other.x_vector, rt.coroot))
        image = tuple(x - pairing * a for x, a in zip(other.x_vector, rt.x_vector))
        perm.append(rd.position_of_x(image))
    word = wordify(rd, tuple(perm))
    y = IntMatrix(tuple(tuple((a == b) - rt.coroot[a] * rt.x_vector[b]
                              for b in range(rd.rank)) for a in range(rd.rank)))
    return WeylElement(word, tuple(perm), y)


def wordify(rd: RootDatum, root_perm: tuple[int, ...]) -> tuple[int, ...]:
    """Reduced word of the Weyl element with the given root permutation, by
    stripping right descents."""
    npos = rd.num_positive
    gen_perms = [g.root_perm for g in rd.weyl_gens]
    perm = root_perm
    letters = []
    identity = tuple(range(len(root_perm)))
    while perm != identity:
        i = next((k for k in range(rd.n) if perm[k] >= npos), None)
        if i is None:
            raise ValueError("permutation does not come from the Weyl group")
        letters.append(i + 1)
        g = gen_perms[i]
        perm = tuple(perm[g[p]] for p in range(len(perm)))
    return tuple(reversed(letters))


def from_perm(rd: RootDatum, root_perm: tuple[int, ...]) -> WeylElement:
    """Weyl element (with reduced word and y_matrix) from a root permutation."""
    word = wordify(rd, root_perm)
    w = make_weyl(rd, word)
    if w.root_perm != root_perm:
        raise ValueError("permutation does not come from the Weyl group")
    return w


@dataclass(frozen=True)
class ReflectionSubgroup:
    """Reflection subgroup of the parent's Weyl group: a chosen simple system
    (1-based parent root indices) and the full subsystem closed under its
    reflections."""

    parent: RootDatum
    simple_indices: tuple[int, ...]
    sub_roots: tuple[int, ...]
    cartan: IntMatrix
    type_label: str
    components: tuple[tuple[int, ...], ...]

    def simple_component_nodes(self) -> tuple[tuple[int, ...], ...]:
        """Components as tuples of parent root indices of their simples."""
        return tuple(tuple(self.simple_indices[i] for i in comp) for comp in self.components)

    @property
    def weyl_size(self) -> int:
        return weyl_order(self.type_label)

    def __hash__(self) -> int:
        return hash((self.parent, self.simple_indices))


def reflection_subgroup(rd: RootDatum, indices: Iterable[int]) -> ReflectionSubgroup:
    """Reflection subgroup generated by the reflections in the given parent
    roots (1-based); the indices must form a simple system for it."""
    idx = tuple(indices)
    for i in idx:
        if not isinstance(i, int) or not 1 <= i <= len(rd.roots):
            raise BadIndex(f"root index {i} out of range 1..{len(rd.roots)}")
    if len(set(idx)) != len(idx):
        raise BadIndex("repeated root index")
    if not idx:
        return ReflectionSubgroup(rd, (), (), IntMatrix(()), "", ())
    sub_cartan = IntMatrix(tuple(
        tuple(sum(a * b for a, b in zip(rd.root(j).x_vector, rd.root(i).coroot)) for j in idx)
        for i in idx))
    label, comps = classify_cartan(sub_cartan)
    # closure of the chosen roots under the reflections they generate
    positions = {i - 1 for i in idx}
    while True:
        fresh = set()
        for b in positions:
            beta = rd.roots[b]
            for g in positions:
                gam = rd.roots[g]
                pairing = sum(a * c for a, c in zip(gam.x_vector, beta.coroot))
                image = tuple(x - pairing * a for x, a in zip(gam.x_vector, beta.x_vector))
                p = rd.position_of_x(image)
                if p not in positions:
                    fresh.add(p)
        if not fresh:
            break
        positions |= fresh
    sub_roots = tuple(sorted(p + 1 for p in positions))
    return ReflectionSubgroup(rd, idx, sub_roots, sub_cartan, label, comps)


def diagram_text(rd: RootDatum) -> str:
    """Node-numbering diagram. E-series prints the branch node 2 above node 4."""
    label, n = rd.type_label, rd.n
    letter = label[0]
    if letter == "E":
        chain = " - ".join(str(i) for i in [1, 3] + list(range(4, n + 1)))
        return f"{label}      2\n        |\n{chain}"
    if letter == "D":
        prefix = f"{label}   "
        parts = [str(i) for i in range(1, n - 1)]
        chain = " - ".join(parts) + f" - {n}"
        col = len(prefix) + len(" - ".join(parts)) - len(parts[-1])
        return f"{' ' * col}{n - 1}\n{' ' * col}|\n{prefix}{chain}"
    if letter == "A":
        return f"{label}   " + " - ".join(str(i) for i in range(1, n + 1))
    if letter == "B":
        return f"{label}   " + " - ".join(str(i) for i in range(1, n)) + f" => {n}"
    if letter == "C":
        return f"{label}   " + " - ".join(str(i) for i in range(1, n)) + f" <= {n}"
    if letter == "F":
        return f"{label}   1 - 2 => 3 - 4"
    return f"{label}   1 <= 2"
