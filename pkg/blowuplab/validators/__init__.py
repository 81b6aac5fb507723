"""Verification suites behind ``specfun-verify`` and ``testfam-table``."""

from blowuplab.validators.report import CheckFailure, IdentityCheck, SuiteFailure, SuiteReport
from blowuplab.validators.specfun_suite import SpecfunGrid, verify_specfun
from blowuplab.validators.testfam_suite import (
    TestfamGrid,
    TestfamRow,
    TestfamTable,
    build_testfam_table,
)

__all__ = [
    "CheckFailure",
    "IdentityCheck",
    "SpecfunGrid",
    "SuiteFailure",
    "SuiteReport",
    "TestfamGrid",
    "TestfamRow",
    "TestfamTable",
    "build_testfam_table",
    "verify_specfun",
]
