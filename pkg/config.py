"""
Configuration management for the fundamental class toolkit
"""

import os


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name, str(default))
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


class Config:
    """Configuration class for managing environment variables and settings"""

    def __init__(self):
        # Precision policy
        self.GUARD_DIGITS: int = _int_env("FUNDCLASS_GUARD_DIGITS", 8)
        if self.GUARD_DIGITS < 0:
            raise ValueError("FUNDCLASS_GUARD_DIGITS must be non-negative")
        self.DEFAULT_PRECISION: int = _int_env("FUNDCLASS_PRECISION", 32)
        self.CYCLOTOMIC_PRECISION: int = _int_env("FUNDCLASS_CYCLOTOMIC_PRECISION", 48)
        self.PRECISION_RETRIES: int = _int_env("FUNDCLASS_PRECISION_RETRIES", 3)

        # Brute-force bounds
        self.MAX_GROUP_ORDER: int = _int_env("FUNDCLASS_MAX_GROUP_ORDER", 10**6)
        self.MAX_BRUTE_GROUP: int = _int_env("FUNDCLASS_MAX_BRUTE_GROUP", 16)
        self.MAX_MODULE_ORDER: int = _int_env("FUNDCLASS_MAX_MODULE_ORDER", 2**16)
        self.MAX_RESIDUE_FIELD: int = _int_env("FUNDCLASS_MAX_RESIDUE_FIELD", 10**6)

        # Verification sweeps
        self.JOBS: int = max(1, _int_env("FUNDCLASS_JOBS", 1))

        # Output and logging
        self.OUTPUT_DIR: str = os.getenv("FUNDCLASS_OUTPUT_DIR", "output")
        self.LOG_FILE: str = os.getenv("FUNDCLASS_LOG_FILE", "fundclass.log")
        self.LOG_LEVEL: str = os.getenv("FUNDCLASS_LOG_LEVEL", "INFO").upper()

    def precision_for(self, family: str, nu: int = 1) -> int:
        """Default requested precision for an extension family"""
        if family == "cyclotomic" and nu >= 2:
            return self.CYCLOTOMIC_PRECISION
        return self.DEFAULT_PRECISION

    def working_precision(self, requested: int, attempt: int = 0) -> int:
        """Requested digits plus guard digits, doubling the guard on each retry"""
        return requested + max(1, self.GUARD_DIGITS) * (2 ** attempt)

    def get_output_path(self, name: str) -> str:
        """Get path for an artifact file inside the output directory"""
        os.makedirs(self.OUTPUT_DIR, exist_ok=True)
        return os.path.join(self.OUTPUT_DIR, name)
