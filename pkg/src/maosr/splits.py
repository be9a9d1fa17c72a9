"""Attribute domains, correlation configurations and open-set split construction.

An attribute domain declares which values of a visual attribute are *known*
(present in training labels) and which are *unknown* (reserved for open-set
testing). A split plan fixes the set of known-value combinations used for
training together with the composition of the open-set test groups.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .errors import ConfigurationError, SplitValidationError, UnknownLabelError

LabelTuple = tuple[str, ...]


class CorrelationKind(str, Enum):
    """How strongly attribute values co-occur in the training combinations."""

    UNCORRELATED = "uncorrelated"
    SEMI_CORRELATED = "semi_correlated"
    CORRELATED = "correlated"
    EXPLICIT = "explicit"


_KIND_ALIASES = {
    "uc": CorrelationKind.UNCORRELATED,
    "sc": CorrelationKind.SEMI_CORRELATED,
    "c": CorrelationKind.CORRELATED,
    "explicit": CorrelationKind.EXPLICIT,
}


def parse_correlation_kind(value: str | CorrelationKind) -> CorrelationKind:
    """Accept both full names and the short forms uc/sc/c."""
    if isinstance(value, CorrelationKind):
        return value
    key = value.strip().lower()
    if key in _KIND_ALIASES:
        return _KIND_ALIASES[key]
    try:
        return CorrelationKind(key)
    except ValueError:
        raise ConfigurationError(
            f"unknown correlation kind {value!r}; expected one of "
            f"{[k.value for k in CorrelationKind]} or uc/sc/c"
        ) from None


@dataclass(frozen=True)
class AttributeDomain:
    """Named attribute with disjoint ordered sets of known and unknown values."""

    name: str
    known_values: tuple[str, ...]
    unknown_values: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "known_values", tuple(str(v) for v in self.known_values))
        object.__setattr__(self, "unknown_values", tuple(str(v) for v in self.unknown_values))
        if not self.known_values or not self.unknown_values:
            raise SplitValidationError(
                f"attribute {self.name!r}: known and unknown value lists must be non-empty"
            )
        for side, values in (("known", self.known_values), ("unknown", self.unknown_values)):
            if len(set(values)) != len(values):
                raise SplitValidationError(f"attribute {self.name!r}: duplicate {side} values")
        overlap = set(self.known_values) & set(self.unknown_values)
        if overlap:
            raise SplitValidationError(
                f"attribute {self.name!r}: values {sorted(overlap)} are both known and unknown"
            )

    def is_known(self, value: str) -> bool:
        return value in self.known_values

    def is_unknown(self, value: str) -> bool:
        return value in self.unknown_values

    def known_index(self, value: str) -> int:
        return self.known_values.index(value)


@dataclass(frozen=True)
class CorrelationConfig:
    """Kind of training-combination construction, plus the verbatim list for EXPLICIT."""

    kind: CorrelationKind
    explicit_combinations: tuple[LabelTuple, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", parse_correlation_kind(self.kind))
        if self.kind is CorrelationKind.EXPLICIT and not self.explicit_combinations:
            raise ConfigurationError("explicit correlation config requires combinations")
        if self.explicit_combinations is not None:
            object.__setattr__(
                self,
                "explicit_combinations",
                tuple(tuple(str(v) for v in combo) for combo in self.explicit_combinations),
            )


class GroupKind(str, Enum):
    KNOWN_SEEN = "known_seen"
    KNOWN_UNSEEN_COMBO = "known_unseen_combo"
    OOD_ATTR = "ood_attr"
    OOD_ALL = "ood_all"


@dataclass(frozen=True, order=True)
class GroupTag:
    """Open-set category of a sample: all-known (seen/unseen combination),
    unknown at exactly one attribute, or unknown at two or more."""

    kind: GroupKind
    attr: int | None = None  # 1-based attribute index, only for OOD_ATTR

    def __post_init__(self):
        if self.kind is GroupKind.OOD_ATTR:
            if self.attr is None or self.attr < 1:
                raise SplitValidationError("OOD_ATTR group tag needs a 1-based attribute index")
        elif self.attr is not None:
            raise SplitValidationError(f"group kind {self.kind.value} takes no attribute index")

    @classmethod
    def known_seen(cls) -> "GroupTag":
        return cls(GroupKind.KNOWN_SEEN)

    @classmethod
    def known_unseen_combo(cls) -> "GroupTag":
        return cls(GroupKind.KNOWN_UNSEEN_COMBO)

    @classmethod
    def ood_attr(cls, attr: int) -> "GroupTag":
        return cls(GroupKind.OOD_ATTR, attr)

    @classmethod
    def ood_all(cls) -> "GroupTag":
        return cls(GroupKind.OOD_ALL)

    @property
    def label(self) -> str:
        if self.kind is GroupKind.OOD_ATTR:
            return f"ood_attr_{self.attr}"
        return self.kind.value

    @classmethod
    def parse(cls, label: str) -> "GroupTag":
        label = label.strip()
        if label.startswith("ood_attr_"):
            return cls.ood_attr(int(label[len("ood_attr_"):]))
        try:
            return cls(GroupKind(label))
        except ValueError:
            raise SplitValidationError(f"unknown group label {label!r}") from None

    @property
    def all_known(self) -> bool:
        return self.kind in (GroupKind.KNOWN_SEEN, GroupKind.KNOWN_UNSEEN_COMBO)

    def unknown_at(self, attr: int) -> bool:
        """Whether attribute `attr` (1-based) carries an unknown value.

        OOD_ALL is treated as unknown at every attribute, which is exact for
        the two-attribute setups this package ships presets for.
        """
        if self.kind is GroupKind.OOD_ATTR:
            return attr == self.attr
        return self.kind is GroupKind.OOD_ALL

    def __str__(self) -> str:
        return self.label


def assign_group(
    labels: Sequence[str],
    domains: Sequence[AttributeDomain],
    train_combinations: Iterable[LabelTuple],
) -> GroupTag:
    """Classify a label tuple into its open-set group.

    All values known and the tuple trained on -> KNOWN_SEEN; all known but the
    combination never trained -> KNOWN_UNSEEN_COMBO; exactly one unknown value
    -> OOD_ATTR(m); two or more unknown -> OOD_ALL.
    """
    labels = tuple(str(v) for v in labels)
    if len(labels) != len(domains):
        raise UnknownLabelError(
            f"label tuple {labels} has {len(labels)} entries for {len(domains)} attributes"
        )
    unknown_positions = []
    for m, (value, domain) in enumerate(zip(labels, domains), start=1):
        if domain.is_unknown(value):
            unknown_positions.append(m)
        elif not domain.is_known(value):
            raise UnknownLabelError(
                f"label {value!r} is neither a known nor an unknown value of "
                f"attribute {domain.name!r}"
            )
    if not unknown_positions:
        if labels in set(map(tuple, train_combinations)):
            return GroupTag.known_seen()
        return GroupTag.known_unseen_combo()
    if len(unknown_positions) == 1:
        return GroupTag.ood_attr(unknown_positions[0])
    return GroupTag.ood_all()


def build_combinations(
    domains: Sequence[AttributeDomain],
    config: CorrelationConfig,
    rotation_seed: int = 0,
) -> frozenset[LabelTuple]:
    """Construct the training combination set for a correlation configuration.

    UNCORRELATED yields the full Cartesian product of known values. CORRELATED
    pairs known value i of the first attribute with value (i + r) mod n of every
    other attribute (a bijection). SEMI_CORRELATED uses the cyclic scheme that
    additionally pairs value i with value (i + r + 1) mod n, doubling the count
    and covering every value at least twice. `rotation_seed` sets the offset r
    for split ablations; r = 0 reproduces the standard diagonal layout.
    """
    domains = tuple(domains)
    if not domains:
        raise ConfigurationError("at least one attribute domain is required")
    kind = config.kind
    known = [d.known_values for d in domains]

    if kind is CorrelationKind.EXPLICIT:
        combos = config.explicit_combinations or ()
        validated = []
        for combo in combos:
            if len(combo) != len(domains):
                raise SplitValidationError(
                    f"explicit combination {combo} has wrong arity for {len(domains)} attributes"
                )
            for value, domain in zip(combo, domains):
                if not domain.is_known(value):
                    raise SplitValidationError(
                        f"explicit combination {combo}: {value!r} is not a known value of "
                        f"attribute {domain.name!r}"
                    )
            validated.append(tuple(combo))
        return frozenset(validated)

    if kind is CorrelationKind.UNCORRELATED:
        return frozenset(itertools.product(*known))

    # Bijective/cyclic constructions need equal known-value counts everywhere.
    sizes = {len(v) for v in known}
    if len(sizes) != 1:
        raise ConfigurationError(
            f"{kind.value} requires equal known-value counts across attributes, "
            f"got {[len(v) for v in known]}"
        )
    n = sizes.pop()
    offset = rotation_seed % n
    combos = set()
    for i in range(n):
        base = tuple(values[(i + offset) % n] for values in known[1:])
        combos.add((known[0][i],) + base)
        if kind is CorrelationKind.SEMI_CORRELATED:
            shifted = tuple(values[(i + offset + 1) % n] for values in known[1:])
            combos.add((known[0][i],) + shifted)
    return frozenset(combos)


def check_combinations(
    domains: Sequence[AttributeDomain],
    config: CorrelationConfig,
    combinations: Iterable[LabelTuple],
) -> None:
    """Raise unless the combination set satisfies the invariants of its kind."""
    combos = set(map(tuple, combinations))
    known = [d.known_values for d in domains]
    for combo in combos:
        for value, domain in zip(combo, domains):
            if not domain.is_known(value):
                raise SplitValidationError(
                    f"combination {combo} uses non-known value {value!r} "
                    f"for attribute {domain.name!r}"
                )
    kind = config.kind
    n = len(known[0])
    if kind is CorrelationKind.UNCORRELATED:
        expected = set(itertools.product(*known))
        if combos != expected:
            raise SplitValidationError(
                f"uncorrelated set must equal the full Cartesian product "
                f"({len(expected)} tuples), got {len(combos)}"
            )
    elif kind is CorrelationKind.CORRELATED:
        if len(combos) != n:
            raise SplitValidationError(
                f"correlated set must have {n} combinations, got {len(combos)}"
            )
        for i, j in itertools.combinations(range(len(domains)), 2):
            mapping = {}
            for combo in combos:
                if combo[i] in mapping and mapping[combo[i]] != combo[j]:
                    raise SplitValidationError(
                        f"correlated mapping between attributes {i + 1} and {j + 1} "
                        f"is not a function"
                    )
                mapping[combo[i]] = combo[j]
            if len(set(mapping.values())) != len(mapping) or len(mapping) != n:
                raise SplitValidationError(
                    f"correlated mapping between attributes {i + 1} and {j + 1} "
                    f"is not a bijection"
                )
    elif kind is CorrelationKind.SEMI_CORRELATED:
        if len(combos) != 2 * n:
            raise SplitValidationError(
                f"semi-correlated set must have {2 * n} combinations, got {len(combos)}"
            )
        for m, domain in enumerate(domains):
            counts = {v: 0 for v in domain.known_values}
            for combo in combos:
                counts[combo[m]] += 1
            starved = sorted(v for v, c in counts.items() if c < 2)
            if starved:
                raise SplitValidationError(
                    f"semi-correlated set covers values {starved} of attribute "
                    f"{domain.name!r} fewer than twice"
                )


def build_test_groups(
    domains: Sequence[AttributeDomain],
    train_combinations: Iterable[LabelTuple],
    require_balanced: bool = True,
) -> dict[GroupTag, frozenset[LabelTuple]]:
    """Compose the open-set test groups over the full known/unknown quadrants.

    Every cell of the known/unknown product structure contributes the full
    Cartesian product of its value sets, so that pooling all groups puts each
    attribute at an unknown value in exactly half the tuples. The all-known
    quadrant is split into seen and unseen combinations against the training
    set. With `require_balanced` (the default, needed for the exact 50% chance
    level) every attribute must have as many unknown as known values.
    """
    domains = tuple(domains)
    train_set = set(map(tuple, train_combinations))
    if require_balanced:
        for domain in domains:
            if len(domain.known_values) != len(domain.unknown_values):
                raise SplitValidationError(
                    f"attribute {domain.name!r} has {len(domain.known_values)} known but "
                    f"{len(domain.unknown_values)} unknown values; balanced test groups "
                    f"need equal counts"
                )
    groups: dict[GroupTag, set[LabelTuple]] = {}
    for mask in itertools.product((False, True), repeat=len(domains)):
        pools = [
            d.unknown_values if unknown else d.known_values
            for d, unknown in zip(domains, mask)
        ]
        n_unknown = sum(mask)
        for combo in itertools.product(*pools):
            if n_unknown == 0:
                tag = (
                    GroupTag.known_seen()
                    if combo in train_set
                    else GroupTag.known_unseen_combo()
                )
            elif n_unknown == 1:
                tag = GroupTag.ood_attr(mask.index(True) + 1)
            else:
                tag = GroupTag.ood_all()
            groups.setdefault(tag, set()).add(combo)
    return {tag: frozenset(tuples) for tag, tuples in groups.items()}


@dataclass(frozen=True)
class SplitPlan:
    """Training combinations plus test-group composition for a set of domains."""

    domains: tuple[AttributeDomain, ...]
    train_combinations: frozenset[LabelTuple]
    test_groups: Mapping[GroupTag, frozenset[LabelTuple]]
    samples_per_combination: int = 1000

    def __post_init__(self):
        object.__setattr__(self, "domains", tuple(self.domains))
        object.__setattr__(
            self, "train_combinations", frozenset(map(tuple, self.train_combinations))
        )
        object.__setattr__(
            self,
            "test_groups",
            {tag: frozenset(map(tuple, tuples)) for tag, tuples in self.test_groups.items()},
        )
        if self.samples_per_combination < 1:
            raise SplitValidationError("samples_per_combination must be positive")
        for combo in self.train_combinations:
            for value, domain in zip(combo, self.domains):
                if not domain.is_known(value):
                    raise SplitValidationError(
                        f"train combination {combo} uses value {value!r} that is not known "
                        f"for attribute {domain.name!r}"
                    )
        for tag, tuples in self.test_groups.items():
            for combo in tuples:
                actual = assign_group(combo, self.domains, self.train_combinations)
                if actual != tag:
                    raise SplitValidationError(
                        f"test tuple {combo} filed under {tag.label} but classifies "
                        f"as {actual.label}"
                    )

    @property
    def num_attributes(self) -> int:
        return len(self.domains)

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(d.name for d in self.domains)

    def test_tuples(self) -> list[tuple[GroupTag, LabelTuple]]:
        """All (group, tuple) pairs in a deterministic order."""
        out = []
        for tag in sorted(self.test_groups, key=lambda t: t.label):
            for combo in sorted(self.test_groups[tag]):
                out.append((tag, combo))
        return out


def make_plan(
    domains: Sequence[AttributeDomain],
    config: CorrelationConfig,
    samples_per_combination: int = 1000,
    rotation_seed: int = 0,
    require_balanced: bool = True,
) -> SplitPlan:
    """Build combinations and test groups in one step and wrap them in a plan."""
    combos = build_combinations(domains, config, rotation_seed)
    check_combinations(domains, config, combos)
    groups = build_test_groups(domains, combos, require_balanced=require_balanced)
    return SplitPlan(
        domains=tuple(domains),
        train_combinations=combos,
        test_groups=groups,
        samples_per_combination=samples_per_combination,
    )


def plan_to_json(plan: SplitPlan) -> dict:
    """Serialize a plan; combinations are stored verbatim (explicit form)."""
    return {
        "domains": [
            {"name": d.name, "known": list(d.known_values), "unknown": list(d.unknown_values)}
            for d in plan.domains
        ],
        "config": {
            "kind": CorrelationKind.EXPLICIT.value,
            "combinations": [list(c) for c in sorted(plan.train_combinations)],
        },
        "samples_per_combination": plan.samples_per_combination,
    }


def plan_from_json(payload: Mapping) -> SplitPlan:
    domains = tuple(
        AttributeDomain(d["name"], tuple(d["known"]), tuple(d["unknown"]))
        for d in payload["domains"]
    )
    config = CorrelationConfig(
        kind=parse_correlation_kind(payload["config"]["kind"]),
        explicit_combinations=tuple(
            tuple(c) for c in payload["config"].get("combinations", [])
        )
        or None,
    )
    combos = build_combinations(domains, config, payload.get("rotation_seed", 0))
    balanced = all(len(d.known_values) == len(d.unknown_values) for d in domains)
    groups = build_test_groups(domains, combos, require_balanced=balanced)
    return SplitPlan(
        domains=domains,
        train_combinations=combos,
        test_groups=groups,
        samples_per_combination=int(payload.get("samples_per_combination", 1000)),
    )


def save_plan(plan: SplitPlan, path) -> None:
    with open(path, "w") as fh:
        json.dump(plan_to_json(plan), fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_plan(path) -> SplitPlan:
    with open(path) as fh:
        return plan_from_json(json.load(fh))
