"""Run configuration models and loading."""

from blowuplab.config.models import (
    DataSpec,
    DiagnosticsSpec,
    MissingSectionError,
    ProfileKind,
    RunConfig,
    SolverSpec,
    SpecfunVerifySpec,
    TestfamSpec,
    TestfamTableSpec,
)
from blowuplab.config.store import (
    ConfigStoreError,
    load_run_config,
    resolve_output_dir,
    save_run_config,
)

__all__ = [
    "ConfigStoreError",
    "DataSpec",
    "DiagnosticsSpec",
    "MissingSectionError",
    "ProfileKind",
    "RunConfig",
    "SolverSpec",
    "SpecfunVerifySpec",
    "TestfamSpec",
    "TestfamTableSpec",
    "load_run_config",
    "resolve_output_dir",
    "save_run_config",
]
