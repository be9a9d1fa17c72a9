"""Built-in dataset presets: attribute domains, palettes and training tables.

Each preset fixes the known/unknown value sets of its two attributes, the RGB
palette for color-valued attributes, and any training-combination lists that
must be pinned verbatim rather than derived from the cyclic construction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

from .errors import ConfigurationError
from .splits import (
    AttributeDomain,
    CorrelationConfig,
    CorrelationKind,
    SplitPlan,
    make_plan,
    parse_correlation_kind,
)

RGB = tuple[int, int, int]


@dataclass(frozen=True)
class DatasetPreset:
    name: str
    domains: tuple[AttributeDomain, AttributeDomain]
    # Attribute name -> value -> RGB, for attributes realized as flat colors.
    value_colors: Mapping[str, Mapping[str, RGB]] = field(default_factory=dict)
    # Correlation kinds whose combination list is pinned verbatim instead of
    # being derived from the cyclic rule.
    pinned_combinations: Mapping[CorrelationKind, tuple[tuple[str, str], ...]] = field(
        default_factory=dict
    )
    default_kind: CorrelationKind = CorrelationKind.UNCORRELATED
    samples_per_combination: int = 1000
    test_samples_per_combination: int = 100
    backbone: str = "lenet"
    image_size: int = 32
    learning_rate: float = 1e-3
    balanced: bool = True

    def plan(
        self,
        kind: str | CorrelationKind | None = None,
        samples_per_combination: int | None = None,
        rotation_seed: int = 0,
    ) -> SplitPlan:
        """Materialize a split plan for one correlation configuration."""
        kind = self.default_kind if kind is None else parse_correlation_kind(kind)
        pinned = self.pinned_combinations.get(kind)
        if pinned is not None:
            config = CorrelationConfig(CorrelationKind.EXPLICIT, pinned)
        elif kind is CorrelationKind.EXPLICIT:
            raise ConfigurationError(
                f"preset {self.name!r} has no pinned explicit combination table"
            )
        else:
            config = CorrelationConfig(kind)
        return make_plan(
            self.domains,
            config,
            samples_per_combination=samples_per_combination or self.samples_per_combination,
            rotation_seed=rotation_seed,
            require_balanced=self.balanced,
        )

    def palette(self, attribute: str) -> dict[str, RGB]:
        colors = self.value_colors.get(attribute)
        if colors is None:
            raise ConfigurationError(
                f"preset {self.name!r} defines no palette for attribute {attribute!r}"
            )
        return dict(colors)

    def to_json(self, kind: str | CorrelationKind | None = None) -> dict:
        """Preset as the plan-file JSON schema plus palette metadata."""
        kind = self.default_kind if kind is None else parse_correlation_kind(kind)
        plan = self.plan(kind)
        return {
            "name": self.name,
            "domains": [
                {"name": d.name, "known": list(d.known_values), "unknown": list(d.unknown_values)}
                for d in self.domains
            ],
            "config": {
                "kind": kind.value,
                "combinations": [list(c) for c in sorted(plan.train_combinations)],
            },
            "samples_per_combination": self.samples_per_combination,
            "value_colors": {
                attr: {v: list(rgb) for v, rgb in colors.items()}
                for attr, colors in self.value_colors.items()
            },
        }


# Maximally separated hues for the five known colors; unknowns sit between
# known hues so their detection is non-trivial. Overridable via generate().
COLOR_MNIST_PALETTE: dict[str, RGB] = {
    "red": (255, 0, 0),
    "yellow": (255, 255, 0),
    "green": (0, 255, 0),
    "cyan": (0, 255, 255),
    "blue": (0, 0, 255),
    "magenta": (255, 0, 255),
    "orange": (255, 128, 0),
    "violet": (128, 0, 255),
    "azure": (0, 128, 255),
    "rose": (255, 0, 128),
}

COLOR_MNIST = DatasetPreset(
    name="color-mnist",
    domains=(
        AttributeDomain("digit", ("0", "1", "2", "3", "4"), ("5", "6", "7", "8", "9")),
        AttributeDomain(
            "color",
            ("red", "yellow", "green", "cyan", "blue"),
            ("magenta", "orange", "violet", "azure", "rose"),
        ),
    ),
    value_colors={"color": COLOR_MNIST_PALETTE},
    # The published semi-correlated table ends with (4, yellow) instead of the
    # cyclic (4, red); the list is pinned so the split reproduces it verbatim.
    pinned_combinations={
        CorrelationKind.SEMI_CORRELATED: (
            ("0", "red"),
            ("0", "yellow"),
            ("1", "yellow"),
            ("1", "green"),
            ("2", "green"),
            ("2", "cyan"),
            ("3", "cyan"),
            ("3", "blue"),
            ("4", "blue"),
            ("4", "yellow"),
        ),
    },
    backbone="lenet",
    image_size=32,
    learning_rate=1e-3,
)

COLOR_OBJECT_PALETTE: dict[str, RGB] = {
    "C1": (0, 100, 0),
    "C2": (188, 143, 143),
    "C3": (255, 0, 0),
    "C4": (255, 215, 0),
    "C5": (0, 255, 0),
    "C6": (65, 105, 225),
    "C7": (255, 20, 147),
    "C8": (135, 188, 191),
    "C9": (27, 145, 68),
    "C10": (48, 101, 53),
    "C11": (20, 235, 154),
    "C12": (187, 33, 227),
}

COLOR_OBJECT = DatasetPreset(
    name="color-object",
    domains=(
        AttributeDomain(
            "object",
            ("boat", "airplane", "truck", "dog", "zebra", "horse"),
            ("bird", "motorcycle", "elephant", "bear", "bed", "giraffe"),
        ),
        AttributeDomain(
            "background",
            ("C1", "C2", "C3", "C4", "C5", "C6"),
            ("C7", "C8", "C9", "C10", "C11", "C12"),
        ),
    ),
    value_colors={"background": COLOR_OBJECT_PALETTE},
    backbone="resnet18",
    image_size=64,
    learning_rate=1e-4,
)

SCENE_OBJECT = DatasetPreset(
    name="scene-object",
    domains=(
        AttributeDomain(
            "object",
            ("boat", "airplane", "truck", "dog", "zebra", "horse"),
            ("bird", "motorcycle", "elephant", "bear", "bed", "giraffe"),
        ),
        AttributeDomain(
            "scene",
            ("beach", "canyon", "building", "stair", "desert", "crevasse"),
            ("ball_pit", "oast_house", "kasbah", "lighthouse", "pagoda", "rock_arch"),
        ),
    ),
    backbone="resnet18",
    image_size=64,
    learning_rate=1e-4,
)

UT_ZAPPOS = DatasetPreset(
    name="ut-zappos",
    domains=(
        AttributeDomain(
            "material",
            ("Faux.Leather", "Full.grain.leather", "Leather", "Rubber", "Suede"),
            ("Canvas", "Nubuck", "Patent.Leather", "Satin", "Synthetic"),
        ),
        AttributeDomain(
            "type",
            (
                "Boots.Knee.High",
                "Boots.Mid-Calf",
                "Shoes.Flats",
                "Shoes.Heels",
                "Shoes.Loafers",
            ),
            ("Boots.Ankle", "Sandals", "Shoes.Oxfords", "Shoes.Sneakers.and.Athletic.Shoes"),
        ),
    ),
    pinned_combinations={
        CorrelationKind.EXPLICIT: (
            ("Faux.Leather", "Boots.Knee.High"),
            ("Faux.Leather", "Boots.Mid-Calf"),
            ("Faux.Leather", "Shoes.Flats"),
            ("Full.grain.leather", "Boots.Mid-Calf"),
            ("Full.grain.leather", "Shoes.Loafers"),
            ("Leather", "Shoes.Flats"),
            ("Leather", "Shoes.Heels"),
            ("Leather", "Shoes.Loafers"),
            ("Rubber", "Boots.Knee.High"),
            ("Rubber", "Boots.Mid-Calf"),
            ("Suede", "Boots.Knee.High"),
            ("Suede", "Shoes.Flats"),
            ("Suede", "Shoes.Heels"),
        ),
    },
    default_kind=CorrelationKind.EXPLICIT,
    backbone="resnet18",
    image_size=64,
    learning_rate=1e-4,
    # 5 known vs 4 unknown shoe types: the realistic split is not balanced.
    balanced=False,
)

PRESETS: dict[str, DatasetPreset] = {
    p.name: p for p in (COLOR_MNIST, COLOR_OBJECT, SCENE_OBJECT, UT_ZAPPOS)
}


def get_preset(name: str) -> DatasetPreset:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigurationError(
            f"unknown preset {name!r}; available: {sorted(PRESETS)}"
        ) from None


def write_preset_json(name: str, path, kind: str | None = None) -> None:
    preset = get_preset(name)
    with open(path, "w") as fh:
        json.dump(preset.to_json(kind), fh, indent=2, sort_keys=True)
        fh.write("\n")
