"""
Check outcomes shared by verdict-producing analyses
"""

from enum import Enum


class CheckStatus(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    NOT_APPLICABLE = "N-A"
