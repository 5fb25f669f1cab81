"""Bundled example models.

The JSON files under ``collabrisk/fixtures/`` are generated from the
builders below; run ``python -m collabrisk.fixtures`` to regenerate them.
"""

from __future__ import annotations

import sys
from importlib import resources
from pathlib import Path

from .collab import (
    ai_failure_defaults,
    build_collaboration_model,
    case_study_fault_tree,
    default_topology,
    idheas_pif_catalog,
)
from .errors import UnknownEntryError
from .lopa import LopaScenario, case_study_layers
from .model_io import Catalogs, ModelDocument, parse_model, serialize_model
from .prob import ProbInterval

FIXTURE_NAMES = ("case_separator_fta", "collab_default_credal", "lopa_table1_defaults")


def build_fixture(name: str) -> ModelDocument:
    if name == "case_separator_fta":
        return ModelDocument(name="separator overpressure fault tree", fault_tree=case_study_fault_tree())
    if name == "lopa_table1_defaults":
        scenario = LopaScenario(ProbInterval.point(1.0), tuple(case_study_layers()), "human-AI collaboration")
        return ModelDocument(name="four-layer LOPA with typical PFDs", lopa=scenario)
    if name == "collab_default_credal":
        catalogs = Catalogs(tuple(ai_failure_defaults()), tuple(idheas_pif_catalog()), default_topology())
        return ModelDocument(
            name="reference human-AI collaboration credal network",
            network=build_collaboration_model(),
            catalogs=catalogs,
        )
    raise UnknownEntryError(f"no fixture named {name!r}")


def fixture_text(name: str) -> str:
    """Shipped text of a fixture."""
    name = name[:-5] if name.endswith(".json") else name
    if name not in FIXTURE_NAMES:
        raise UnknownEntryError(f"no fixture named {name!r}")
    return resources.files("collabrisk").joinpath("fixtures", name + ".json").read_text(encoding="utf-8")


def load_fixture(name: str) -> ModelDocument:
    return parse_model(fixture_text(name), strict=True)


def write_fixtures(directory: Path) -> list[Path]:
    directory.mkdir(parents=True, exist_ok=True)
    out = []
    for name in FIXTURE_NAMES:
        path = directory / f"{name}.json"
        path.write_text(serialize_model(build_fixture(name)), encoding="utf-8")
        out.append(path)
    return out


if __name__ == "__main__":
    target = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(__file__).parent / "fixtures"
    for p in write_fixtures(target):
        print(p)
