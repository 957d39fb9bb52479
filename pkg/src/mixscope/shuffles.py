"""Shuffle chains on small decks and the catalog of deck statistics.

A deck of n cards is a tuple of the labels 1..n read top to bottom, so
deck[0] is the top card and positions are 1-based in every public value.
Three chains are provided:

  random-to-top   each step moves a uniformly chosen card to the top.
  walk1           with probability 1/2 moves a uniformly chosen card to the
                  top, otherwise moves the top card to the bottom.
  inverse riffle  each step assigns every card an independent uniform bit
                  and stably sorts, zeros above ones; t steps assign t-bit
                  strings per card.

All three fix the uniform distribution on the symmetric group.  Kernels are
built explicitly for 2 <= n <= 8 with states encoded by Lehmer rank, which
keeps exact evolution over S_n cheap (8! = 40320 states).

Multi-step riffle strings record the earliest step's bit first.  One-shot
application must agree with composing single-bit steps, and a stable sort
makes the LAST step's bit most significant, so the sort key is the reversed
recorded string.  The composition property test pins this convention.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .budget import require_within_budget
from .dist import Distribution, Kernel, Statistic, push_forward

MAX_DENSE_N = 8

_FACT = [1]
for _i in range(1, 13):
    _FACT.append(_FACT[-1] * _i)


# Decks and moves

def identity_deck(n: int) -> tuple:
    if n < 2:
        raise ValueError("deck needs at least 2 cards")
    return tuple(range(1, n + 1))


def validate_deck(deck: tuple) -> None:
    n = len(deck)
    if n < 2:
        raise ValueError("deck needs at least 2 cards")
    if sorted(deck) != list(range(1, n + 1)):
        raise ValueError(f"not a permutation of 1..{n}: {deck!r}")


@dataclass(frozen=True)
class Move:
    """Either ToTop(card) or TopToBottom."""

    kind: str
    card: int | None = None

    def __post_init__(self):
        if self.kind == "to_top":
            if not isinstance(self.card, int):
                raise ValueError("to_top needs a card label")
        elif self.kind == "top_to_bottom":
            if self.card is not None:
                raise ValueError("top_to_bottom takes no card")
        else:
            raise ValueError(f"unknown move kind {self.kind!r}")


def to_top(card: int) -> Move:
    return Move("to_top", card)


TOP_TO_BOTTOM = Move("top_to_bottom")


def apply_move(deck: tuple, mv: Move) -> tuple:
    """Apply one move; a bijection on decks for every fixed move."""
    if mv.kind == "to_top":
        try:
            i = deck.index(mv.card)
        except ValueError:
            raise ValueError(f"unknown card label {mv.card!r} for deck of {len(deck)}")
        return (mv.card,) + deck[:i] + deck[i + 1:]
    return deck[1:] + deck[:1]


# Lehmer encoding of S_n for dense state spaces

def rank_deck(deck: tuple) -> int:
    """Lehmer rank of a deck among all permutations of its labels."""
    n = len(deck)
    rank = 0
    for i in range(n):
        smaller = sum(1 for j in range(i + 1, n) if deck[j] < deck[i])
        rank += smaller * _FACT[n - 1 - i]
    return rank


def unrank_deck(n: int, rank: int) -> tuple:
    if not 0 <= rank < _FACT[n]:
        raise ValueError(f"rank {rank} out of range for n={n}")
    labels = list(range(1, n + 1))
    out = []
    for i in range(n):
        f = _FACT[n - 1 - i]
        idx, rank = divmod(rank, f)
        out.append(labels.pop(idx))
    return tuple(out)


def deck_space(n: int) -> tuple:
    """All Lehmer ranks of S_n, the dense state space for kernels."""
    return tuple(range(_FACT[n]))


def _require_dense(n: int) -> None:
    if not 2 <= n <= MAX_DENSE_N:
        raise ValueError(
            f"dense kernels cover 2 <= n <= {MAX_DENSE_N}; n={n} needs sampler mode"
        )


def random_to_top_kernel(n: int) -> Kernel:
    """Each of the n to-top moves with probability 1/n, over Lehmer ranks."""
    _require_dense(n)
    p = Fraction(1, n)
    rows = {}
    for r in deck_space(n):
        deck = unrank_deck(n, r)
        row: dict = {}
        for c in range(1, n + 1):
            tr = rank_deck(apply_move(deck, to_top(c)))
            row[tr] = row.get(tr, Fraction(0)) + p
        rows[r] = tuple(sorted(row.items()))
    return Kernel(deck_space(n), rows)


def walk1_kernel(n: int) -> Kernel:
    """To-top moves at 1/(2n) each plus top-to-bottom at 1/2."""
    _require_dense(n)
    p = Fraction(1, 2 * n)
    rows = {}
    for r in deck_space(n):
        deck = unrank_deck(n, r)
        row = {}
        for c in range(1, n + 1):
            tr = rank_deck(apply_move(deck, to_top(c)))
            row[tr] = row.get(tr, Fraction(0)) + p
        tr = rank_deck(apply_move(deck, TOP_TO_BOTTOM))
        row[tr] = row.get(tr, Fraction(0)) + Fraction(1, 2)
        rows[r] = tuple(sorted(row.items()))
    return Kernel(deck_space(n), rows)


def riffle_kernel(n: int) -> Kernel:
    """One single-bit inverse riffle step: 2^n equally likely bit columns."""
    _require_dense(n)
    p = Fraction(1, 2 ** n)
    rows = {}
    for r in deck_space(n):
        deck = unrank_deck(n, r)
        row = {}
        for bits in itertools.product("01", repeat=n):
            tr = rank_deck(inverse_riffle_apply(deck, bits))
            row[tr] = row.get(tr, Fraction(0)) + p
        rows[r] = tuple(sorted(row.items()))
    return Kernel(deck_space(n), rows)


# Inverse riffle

def inverse_riffle_apply(deck: tuple, strings: tuple) -> tuple:
    """Stable sort of the deck by per-card strings, reversed bit order.

    strings[c-1] is card c's recorded string, earliest step's bit first; all
    strings must share one length.  Ties keep the current relative order.
    """
    n = len(deck)
    if len(strings) != n:
        raise ValueError(f"{len(strings)} strings for {n} cards")
    t = len(strings[0])
    if any(len(s) != t for s in strings):
        raise ValueError("strings must share a common length")
    return tuple(sorted(deck, key=lambda c: strings[c - 1][::-1]))


def enumerate_riffle(n: int, t: int):
    """All (2^t)^n string assignments with the deck each produces from the
    identity start; every assignment carries weight 2^(-tn)."""
    count = (2 ** t) ** n
    require_within_budget(count, f"riffle enumeration n={n} t={t}", "use Monte-Carlo mode")
    start = identity_deck(n)
    weight = Fraction(1, count)
    all_strings = ["".join(bits) for bits in itertools.product("01", repeat=t)]
    out = []
    for assignment in itertools.product(all_strings, repeat=n):
        out.append((assignment, inverse_riffle_apply(start, assignment), weight))
    return out


# Statistic catalog

STATISTIC_KINDS = (
    "top_card",
    "top_k_order",
    "top_k_set",
    "position_of",
    "positions_of",
    "parity",
    "card_above",
    "card_below",
    "relative_order",
    "distance",
    "block_sets",
    "modular_hands",
)


@dataclass(frozen=True)
class StatisticKind:
    """A tagged statistic descriptor; params depend on the kind."""

    kind: str
    params: tuple = ()

    def __post_init__(self):
        if self.kind not in STATISTIC_KINDS:
            raise ValueError(f"unknown statistic kind {self.kind!r}")
        object.__setattr__(self, "params", tuple(self.params))

    def label(self) -> str:
        if not self.params:
            return self.kind
        return f"{self.kind}:{','.join(str(p) for p in self.params)}"


def validate_statistic_kind(kind: StatisticKind, n: int) -> None:
    """Check parameter ranges against a deck size n."""
    k, ps = kind.kind, kind.params
    if k in ("top_card", "parity"):
        if ps:
            raise ValueError(f"{k} takes no parameters")
    elif k in ("top_k_order", "top_k_set"):
        if len(ps) != 1 or not 1 <= ps[0] <= n:
            raise ValueError(f"{k} needs one parameter k with 1 <= k <= {n}")
    elif k in ("position_of", "card_above", "card_below"):
        if len(ps) != 1 or not 1 <= ps[0] <= n:
            raise ValueError(f"{k} needs one card label in 1..{n}")
    elif k in ("positions_of", "relative_order"):
        if not ps or len(set(ps)) != len(ps) or any(not 1 <= c <= n for c in ps):
            raise ValueError(f"{k} needs distinct card labels in 1..{n}")
        if k == "relative_order" and len(ps) < 2:
            raise ValueError("relative_order needs at least two cards")
    elif k == "distance":
        if len(ps) != 2 or ps[0] == ps[1] or any(not 1 <= c <= n for c in ps):
            raise ValueError(f"distance needs two distinct card labels in 1..{n}")
    elif k == "block_sets":
        if len(ps) != 1 or ps[0] < 1 or n % ps[0] != 0:
            raise ValueError(f"block_sets needs a block size dividing n={n}")
    elif k == "modular_hands":
        if len(ps) != 1 or ps[0] < 1 or n % ps[0] != 0:
            raise ValueError(f"modular_hands needs a modulus dividing n={n}")


def parse_statistic(text: str, n: int) -> StatisticKind:
    """Parse the CLI statistic grammar, e.g. top_k_order:2 or distance:1,5."""
    name, _, arg = text.partition(":")
    if name not in STATISTIC_KINDS:
        raise ValueError(f"unknown statistic {name!r}")
    params: tuple = ()
    if arg:
        try:
            params = tuple(int(p) for p in arg.split(","))
        except ValueError:
            raise ValueError(f"bad statistic parameters {arg!r}")
    kind = StatisticKind(name, params)
    validate_statistic_kind(kind, n)
    return kind


def _parity(deck: tuple) -> str:
    inv = sum(
        1
        for i in range(len(deck))
        for j in range(i + 1, len(deck))
        if deck[i] > deck[j]
    )
    return "even" if inv % 2 == 0 else "odd"


def evaluate_statistic(kind: StatisticKind, deck: tuple):
    """Evaluate a statistic on a deck; values are hashable and canonical."""
    validate_statistic_kind(kind, len(deck))
    k, ps = kind.kind, kind.params
    n = len(deck)
    if k == "top_card":
        return deck[0]
    if k == "top_k_order":
        return deck[: ps[0]]
    if k == "top_k_set":
        return tuple(sorted(deck[: ps[0]]))
    if k == "position_of":
        return deck.index(ps[0]) + 1
    if k == "positions_of":
        return tuple(deck.index(c) + 1 for c in sorted(ps))
    if k == "parity":
        return _parity(deck)
    if k == "card_above":
        i = deck.index(ps[0])
        return "none" if i == 0 else deck[i - 1]
    if k == "card_below":
        i = deck.index(ps[0])
        return "none" if i == n - 1 else deck[i + 1]
    if k == "relative_order":
        chosen = set(ps)
        return tuple(c for c in deck if c in chosen)
    if k == "distance":
        return abs(deck.index(ps[0]) - deck.index(ps[1]))
    if k == "block_sets":
        b = ps[0]
        return tuple(tuple(sorted(deck[i * b:(i + 1) * b])) for i in range(n // b))
    if k == "modular_hands":
        m = ps[0]
        hands = [[] for _ in range(m)]
        for pos0, c in enumerate(deck):
            hands[pos0 % m].append(c)
        return tuple(tuple(sorted(h)) for h in hands)
    raise AssertionError(k)


def deck_statistic(n: int, kind: StatisticKind) -> Statistic:
    """The statistic as a function of Lehmer ranks, for ranked state spaces."""
    validate_statistic_kind(kind, n)
    return Statistic(kind.label(), lambda r: evaluate_statistic(kind, unrank_deck(n, r)))


def stationary_statistic_distribution(n: int, kind: StatisticKind) -> Distribution:
    """Exact law of the statistic under the uniform deck, by full enumeration."""
    if n > MAX_DENSE_N:
        raise ValueError(f"stationary enumeration covers n <= {MAX_DENSE_N}")
    validate_statistic_kind(kind, n)
    uniform = Distribution.uniform(deck_space(n))
    return push_forward(uniform, deck_statistic(n, kind))
