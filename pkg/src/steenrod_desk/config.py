from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml
from serdescontainer import BaseContainer

from .comodule import ComodAlgebraPresentation
from .errors import ParseError, WindowError
from .graded import DegreeWindow
from .subquot import Profile

SCENARIOS = ("H_BP", "MSP_BP", "YN_MSP", "YN_YNEXT")


def _load(path: Union[str, Path]) -> Dict[str, Any]:
    with open(path, "r", encoding="utf-8") as f:
        data = yaml.safe_load(f)
    if not isinstance(data, dict):
        raise ParseError(f"{path}: expected a mapping at the top level")
    return data


class _FileContainer(BaseContainer):
    @classmethod
    def from_file(cls, path: Union[str, Path]) -> Any:
        """Read a YAML (or JSON) file and pass it to ``from_dict``."""
        return cls.from_dict(_load(path))


@dataclass
class WindowConfig(_FileContainer):
    """One rung of a window ladder.

    Attributes:
        max_degree (int): Top computed degree (``max`` in files).
        guard (int): Width of the guard band; statements are asserted only in
            degrees up to ``max_degree - guard``.
    """

    max_degree: int
    guard: int

    @classmethod
    def from_dict(cls, data: Dict[str, Any], **kwargs) -> WindowConfig:
        data = dict(data)
        if "max" in data:
            data["max_degree"] = data.pop("max")
        return super().from_dict(data, **kwargs)

    def window(self) -> DegreeWindow:
        return DegreeWindow(self.max_degree, self.guard)


@dataclass
class ScenarioConfig(_FileContainer):
    """A vanishing scenario with its window ladder, e.g.

        {"scenario": "YN_YNEXT", "n": 1, "windows": [{"max": 32, "guard": 14}]}
    """

    scenario: str
    n: Optional[int] = None
    windows: List[WindowConfig] = field(default_factory=list)

    def __post_init__(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ParseError(f"unknown scenario {self.scenario!r}, expected one of {SCENARIOS}")
        if not self.windows:
            raise WindowError(f"{self.scenario}: the window ladder is empty")

    def custom_types() -> List[Any]:
        """For BaseContainer.from_dict"""
        return [WindowConfig]

    @classmethod
    def from_dict(cls, data: Dict[str, Any], **kwargs) -> ScenarioConfig:
        data = dict(data)
        windows = [
            w if isinstance(w, WindowConfig) else WindowConfig.from_dict(w)
            for w in data.pop("windows", [])
        ]
        return cls(windows=windows, **data)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scenario": self.scenario,
            "n": self.n,
            "windows": [{"max": w.max_degree, "guard": w.guard} for w in self.windows],
        }


@dataclass
class ProfileConfig(_FileContainer):
    """Profile file: {"caps": [0, 0, "inf"], "tail": "inf"}."""

    caps: List[Any] = field(default_factory=list)
    tail: Any = "inf"
    label: str = ""

    @classmethod
    def from_dict(cls, data: Dict[str, Any], **kwargs) -> ProfileConfig:
        # caps mix ints and "inf"; keep them as given for Profile.from_dict
        return cls(list(data.get("caps", [])), data.get("tail", "inf"), data.get("label", ""))

    def to_profile(self) -> Profile:
        return Profile.from_dict({"caps": self.caps, "tail": self.tail}, label=self.label)


@dataclass
class PresentationConfig(_FileContainer):
    """Polynomial comodule algebra file::

        name: H_*(Y_1)
        generators:
          - {name: y1, degree: 4}
        coaction:
          y1: "1|y1 + z1^4|1"
        conjugate: true
    """

    generators: List[Dict[str, Any]]
    coaction: Dict[str, str] = field(default_factory=dict)
    conjugate: bool = False
    name: str = ""

    @classmethod
    def from_dict(cls, data: Dict[str, Any], **kwargs) -> PresentationConfig:
        if "generators" not in data:
            raise ParseError("a presentation needs a generators list")
        return cls(
            list(data["generators"]),
            dict(data.get("coaction", {})),
            bool(data.get("conjugate", False)),
            str(data.get("name", "")),
        )

    def to_presentation(self) -> ComodAlgebraPresentation:
        data = {
            "generators": self.generators,
            "coaction": self.coaction,
            "conjugate": self.conjugate,
        }
        return ComodAlgebraPresentation.from_dict(data, name=self.name)
