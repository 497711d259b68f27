"""
Fingerprints for run outputs and configurations

SHA-256 digests recorded in run manifests so outputs can be checked for
byte-identity across reruns.
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Mapping, Union

logger = logging.getLogger('aperiodic')

CHUNK_SIZE = 1 << 20


class HashUtility:
    """
    Utility class for hashing run artifacts
    """

    @staticmethod
    def hash_data(data: str) -> str:
        return hashlib.sha256(data.encode()).hexdigest()

    @staticmethod
    def hash_file(path: Union[str, Path]) -> str:
        """SHA-256 of a file, read in chunks"""
        hash_sha256 = hashlib.sha256()
        with open(path, 'rb') as handle:
            for chunk in iter(lambda: handle.read(CHUNK_SIZE), b''):
                hash_sha256.update(chunk)
        return hash_sha256.hexdigest()

    @staticmethod
    def hash_config(config: Mapping[str, Any]) -> str:
        """Digest of a configuration in canonical JSON form"""
        canonical = json.dumps(config, sort_keys=True, separators=(',', ':'), default=str)
        return HashUtility.hash_data(canonical)

    @staticmethod
    def verify_file(path: Union[str, Path], hash_value: str) -> bool:
        """Verify a file against its recorded digest"""
        matches = HashUtility.hash_file(path) == hash_value
        if not matches:
            logger.warning(f"Fingerprint mismatch for {path}")
        return matches
