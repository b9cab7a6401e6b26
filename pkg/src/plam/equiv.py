"""The Markov chain of closed terms and distinguished head normal forms,
with bounded game-style refutation of probabilistic (bi)similarity and
applicative mass comparison.

Everything here refutes only: a returned witness is a replayable
certificate of non-(bi)similarity, while None means "inconclusive at
these bounds", never an equivalence certificate. All mass comparisons are
interval comparisons: evaluation yields lower bounds, and the upper end
of an interval closes only when the residual was certified divergent.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Sequence, Tuple

from .prob import Dyadic, Distr, ONE, ZERO
from .smallstep import ConvergeResult, converge
from .syntax import App, Lam, Term, free_vars, is_closed, lam_close, pretty, substitute
from .trees import Different, prob_tree, tree_eq

DEFAULT_POOL_NAMES = ("I", "Omega", "Delta", "T", "F")
STEP_FACTOR = 6


class TermState:
    __slots__ = ("term", "_hash")

    def __init__(self, term: Term):
        self.term = term
        self._hash = hash(("term", term))

    def __eq__(self, other):
        return type(other) is TermState and other.term == self.term

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"TermState({pretty(self.term)})"


class HnfState:
    """A distinguished hnf λx.H, stored binder-peeled as the body H."""

    __slots__ = ("body", "_hash")

    def __init__(self, body: Term):
        self.body = body
        self._hash = hash(("hnf", body))

    def __eq__(self, other):
        return type(other) is HnfState and other.body == self.body

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"HnfState({pretty(Lam(self.body))})"


class Tau:
    def __repr__(self):
        return "tau"

    def __eq__(self, other):
        return type(other) is Tau

    def __hash__(self):
        return hash(Tau)


class Apply:
    __slots__ = ("argument",)

    def __init__(self, argument: Term):
        if not is_closed(argument):
            raise ValueError("apply labels must be closed terms")
        self.argument = argument

    def __eq__(self, other):
        return type(other) is Apply and other.argument == self.argument

    def __hash__(self):
        return hash(("apply", self.argument))

    def __repr__(self):
        return f"Apply({pretty(self.argument)})"


TAU = Tau()


class TransitionResult:
    """Successor distribution plus deficit interval information."""

    __slots__ = ("distr", "exact")

    def __init__(self, distr: Distr, exact: bool):
        self.distr = distr
        self.exact = exact

    @property
    def deficit(self) -> Dyadic:
        return ONE - self.distr.mass

    def lower(self, states) -> Dyadic:
        total = ZERO
        for s in states:
            total = total + self.distr.weight(s)
        return total

    def upper(self, states) -> Dyadic:
        total = self.lower(states)
        return total if self.exact else total + self.deficit


_EMPTY_EXACT = TransitionResult(Distr(), True)


def transitions(state, label, fuel: int, steps: Optional[int] = None) -> TransitionResult:
    """Transition probabilities of the chain, as a certified lower bound.

    A term state evaluates under τ, landing on binder-peeled hnf states;
    a distinguished hnf consumes an Apply label by substitution. All other
    pairs have no transitions at all (exactly).
    """
    if isinstance(state, TermState) and label == TAU:
        if steps is None:
            steps = max(STEP_FACTOR * fuel, 8)
        res = converge(state.term, steps)
        pairs = []
        for h, w in res.distr.items():
            if not isinstance(h, Lam):
                raise AssertionError("closed hnf without leading binder")
            pairs.append((HnfState(h.body), w))
        return TransitionResult(Distr(pairs), res.exact)
    if isinstance(state, HnfState) and isinstance(label, Apply):
        succ = TermState(substitute(state.body, label.argument))
        return TransitionResult(Distr([(succ, ONE)]), True)
    return _EMPTY_EXACT


# ---------------------------------------------------------------------------
# Refutation witnesses


class Witness:
    """A checkable separation certificate for a state pair.

    `block` is a set of successor states such that every block member was
    itself certifiably separated from every non-member (the sub-witnesses
    justify this); the probability intervals of entering the block then
    fail to intersect.
    """

    __slots__ = ("label", "block", "left", "right", "sub", "image")

    def __init__(
        self,
        label,
        block: Tuple,
        left: Tuple[Dyadic, Dyadic],
        right: Tuple[Dyadic, Dyadic],
        sub: Dict[Tuple, "Witness"],
        image: Optional[Tuple] = None,
    ):
        self.label = label
        self.block = block
        self.left = left  # (lower, upper) interval of block mass
        self.right = right
        self.sub = sub
        # for one-sided witnesses: the right-side states not yet refuted
        self.image = image

    def principal_trace(self) -> List:
        """Flatten to a readable move list: labels descended, then masses."""
        moves = [(self.label, self.left, self.right)]
        if self.sub:
            first = next(iter(self.sub.values()))
            if isinstance(first, Witness):
                moves.extend(first.principal_trace())
        return moves

    def mass_pairs(self) -> List[Tuple[Dyadic, Dyadic]]:
        pairs = [(self.left[0], self.right[0])]
        for w in self.sub.values():
            if isinstance(w, Witness):
                pairs.extend(w.mass_pairs())
        return pairs

    def __repr__(self):
        return (
            f"Witness({self.label!r}, block={len(self.block)} states, "
            f"left={self.left[0]}..{self.left[1]}, right={self.right[0]}..{self.right[1]})"
        )


class TreeWitness:
    """Separation by canonical tree difference at a fixed level."""

    __slots__ = ("level", "detail")

    def __init__(self, level: int, detail: Different):
        self.level = level
        self.detail = detail

    def __repr__(self):
        return f"TreeWitness(level={self.level}, {self.detail!r})"


def _state_term(state) -> Term:
    return state.term if isinstance(state, TermState) else Lam(state.body)


def _disjoint(left: Tuple[Dyadic, Dyadic], right: Tuple[Dyadic, Dyadic]) -> bool:
    return left[0] > right[1] or right[0] > left[1]


class Lab:
    """Shared configuration and memo tables for the refutation games."""

    def __init__(
        self,
        fuel: int = 8,
        pool: Sequence[Term] = (),
        tree_level: int = 0,
        steps: Optional[int] = None,
    ):
        self.fuel = fuel
        self.pool = tuple(pool)
        self.tree_level = tree_level
        self.steps = steps
        self._trans_memo: Dict[Tuple, TransitionResult] = {}
        self._bisim_memo: Dict[Tuple, Optional[object]] = {}
        self._sim_memo: Dict[Tuple, Optional[object]] = {}

    def labels(self):
        return [TAU] + [Apply(p) for p in self.pool]

    def trans(self, state, label) -> TransitionResult:
        key = (state, label)
        if key not in self._trans_memo:
            self._trans_memo[key] = transitions(state, label, self.fuel, self.steps)
        return self._trans_memo[key]

    def _tree_separated(self, u, v) -> Optional[TreeWitness]:
        if self.tree_level <= 0:
            return None
        a = prob_tree(_state_term(u), self.tree_level, self.fuel)
        b = prob_tree(_state_term(v), self.tree_level, self.fuel)
        verdict = tree_eq(a, b)
        if isinstance(verdict, Different):
            return TreeWitness(self.tree_level, verdict)
        return None

    # -- bisimilarity ------------------------------------------------------

    def bisim_diff(self, u, v, depth: int) -> Optional[object]:
        """A witness that u and v are not bisimilar, or None."""
        if u == v:
            return None
        if depth <= 0:
            return None
        key = (u, v, depth)
        if key in self._bisim_memo:
            return self._bisim_memo[key]
        self._bisim_memo[key] = None  # cut cycles pessimistically
        result = self._tree_separated(u, v)
        if result is None:
            for label in self.labels():
                result = self._bisim_label_diff(u, v, label, depth)
                if result is not None:
                    break
        self._bisim_memo[key] = result
        return result

    def _bisim_label_diff(self, u, v, label, depth: int) -> Optional[Witness]:
        du, dv = self.trans(u, label), self.trans(v, label)
        support = list(du.distr.support()) + [
            s for s in dv.distr.support() if s not in du.distr
        ]
        if not support:
            return None
        # pairwise separation certificates at reduced depth
        sub: Dict[Tuple, object] = {}
        separated: Dict[Tuple, bool] = {}
        for i, s1 in enumerate(support):
            for s2 in support[i + 1:]:
                w = self.bisim_diff(s1, s2, depth - 1)
                separated[(s1, s2)] = separated[(s2, s1)] = w is not None
                if w is not None:
                    sub[(s1, s2)] = w
        # blocks are components of the not-provably-separated graph, so
        # cross-block pairs are all certified distinct
        blocks = _components(support, separated)
        for block in blocks:
            left = (du.lower(block), du.upper(block))
            right = (dv.lower(block), dv.upper(block))
            if _disjoint(left, right):
                used = {
                    pair: w
                    for pair, w in sub.items()
                    if (pair[0] in block) != (pair[1] in block)
                }
                return Witness(label, tuple(block), left, right, used)
        return None

    # -- similarity --------------------------------------------------------

    def sim_diff(self, u, v, depth: int) -> Optional[object]:
        """A witness that u is not simulated by v, or None."""
        if u == v:
            return None
        if depth <= 0:
            return None
        key = (u, v, depth)
        if key in self._sim_memo:
            return self._sim_memo[key]
        self._sim_memo[key] = None
        result = None
        for label in self.labels():
            result = self._sim_label_diff(u, v, label, depth)
            if result is not None:
                break
        self._sim_memo[key] = result
        return result

    def _sim_label_diff(self, u, v, label, depth: int) -> Optional[Witness]:
        du, dv = self.trans(u, label), self.trans(v, label)
        left_support = list(du.distr.support())
        if not left_support:
            return None
        right_support = list(dv.distr.support())
        # for each left state, which right states might still be above it
        sub: Dict[Tuple, object] = {}
        above: Dict[object, List[object]] = {}
        for s1 in left_support:
            above[s1] = []
            for s2 in right_support:
                w = self.sim_diff(s1, s2, depth - 1)
                if w is None:
                    above[s1].append(s2)
                else:
                    sub[(s1, s2)] = w
        subsets = _subsets(left_support) if len(left_support) <= 8 else [
            [s] for s in left_support
        ] + [left_support]
        for block in subsets:
            image = set()
            for s1 in block:
                image.update(above[s1])
            left_lower = du.lower(block)
            right_upper = dv.upper(image)
            if left_lower > right_upper:
                used = {
                    pair: w
                    for pair, w in sub.items()
                    if pair[0] in block and pair[1] not in image
                }
                return Witness(
                    label,
                    tuple(block),
                    (left_lower, du.upper(block)),
                    (dv.lower(image), right_upper),
                    used,
                    image=tuple(image),
                )
        return None


def _components(items, separated) -> List[List]:
    remaining = list(items)
    out = []
    while remaining:
        seed = remaining.pop(0)
        comp = [seed]
        changed = True
        while changed:
            changed = False
            for other in list(remaining):
                if any(not separated.get((other, member), False) for member in comp):
                    comp.append(other)
                    remaining.remove(other)
                    changed = True
        out.append(comp)
    return out


def _subsets(items) -> List[List]:
    out = []
    for mask in range(1, 1 << len(items)):
        out.append([s for i, s in enumerate(items) if mask & (1 << i)])
    return out


def _closed_pair(m: Term, n: Term) -> Tuple[Term, Term]:
    names = sorted(free_vars(m) | free_vars(n))
    for name in reversed(names):
        from .syntax import bind_name

        m = Lam(bind_name(m, name))
        n = Lam(bind_name(n, name))
    return m, n


def refute_bisim(
    m: Term,
    n: Term,
    depth: int = 8,
    fuel: int = 8,
    pool: Sequence[Term] = (),
    tree_level: int = 0,
    steps: Optional[int] = None,
) -> Optional[object]:
    """Search for a certificate that m and n are not bisimilar.

    Open terms are λ-closed first (free names bound in lexicographic
    order). None is always inconclusive.
    """
    m, n = _closed_pair(m, n)
    lab = Lab(fuel=fuel, pool=pool, tree_level=tree_level, steps=steps)
    return lab.bisim_diff(TermState(m), TermState(n), depth)


def refute_sim(
    m: Term,
    n: Term,
    depth: int = 6,
    fuel: int = 8,
    pool: Sequence[Term] = (),
    steps: Optional[int] = None,
) -> Optional[object]:
    """Search for a certificate that m is not simulated by n."""
    m, n = _closed_pair(m, n)
    lab = Lab(fuel=fuel, pool=pool, steps=steps)
    return lab.sim_diff(TermState(m), TermState(n), depth)


def verify_witness(u, v, witness, lab: Lab, bisim: bool) -> bool:
    """Replay a certificate: recompute every claimed interval exactly."""
    if isinstance(witness, TreeWitness):
        a = prob_tree(_state_term(u), witness.level, lab.fuel)
        b = prob_tree(_state_term(v), witness.level, lab.fuel)
        return isinstance(tree_eq(a, b), Different)
    du, dv = lab.trans(u, witness.label), lab.trans(v, witness.label)
    if bisim:
        left = (du.lower(witness.block), du.upper(witness.block))
        right = (dv.lower(witness.block), dv.upper(witness.block))
        if left != witness.left or right != witness.right:
            return False
        if not _disjoint(left, right):
            return False
    else:
        if du.lower(witness.block) != witness.left[0]:
            return False
        image = witness.image if witness.image is not None else ()
        if dv.upper(image) != witness.right[1]:
            return False
        if witness.left[0] <= witness.right[1]:
            return False
        # every dropped right-side state must be refuted against the whole block
        for s2 in dv.distr.support():
            if s2 in image:
                continue
            for s1 in witness.block:
                if s1 != s2 and (s1, s2) not in witness.sub:
                    return False
    return all(
        verify_witness(pair[0], pair[1], w, lab, bisim)
        for pair, w in witness.sub.items()
    )


# ---------------------------------------------------------------------------
# Applicative comparison


class SeqReport:
    __slots__ = ("args", "left", "right", "verdict")

    def __init__(self, args, left: ConvergeResult, right: ConvergeResult, verdict: str):
        self.args = args
        self.left = left
        self.right = right
        self.verdict = verdict

    def __repr__(self):
        return (
            f"SeqReport({[pretty(a) for a in self.args]}, "
            f"left={self.left.mass}, right={self.right.mass}, {self.verdict})"
        )


def applicative_compare(
    m: Term,
    n: Term,
    arg_seqs: Sequence[Sequence[Term]],
    fuel: int = 8,
    steps: Optional[int] = None,
) -> List[SeqReport]:
    """Compare total convergence mass under applicative contexts.

    LeftExceeds certifies that m's mass beats anything n could still
    reach (refuting m below n); symmetrically for RightExceeds.
    """
    m, n = _closed_pair(m, n)
    if steps is None:
        steps = max(STEP_FACTOR * fuel, 8)
    reports = []
    for seq in arg_seqs:
        lt, rt = m, n
        for a in seq:
            lt, rt = App(lt, a), App(rt, a)
        left = converge(lt, steps)
        right = converge(rt, steps)
        if left.mass > right.upper_mass:
            verdict = "LeftExceeds"
        elif right.mass > left.upper_mass:
            verdict = "RightExceeds"
        else:
            verdict = "Inconclusive"
        reports.append(SeqReport(tuple(seq), left, right, verdict))
    return reports
