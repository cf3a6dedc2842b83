"""Twisted Reed-Solomon McEliece cryptosystem and key-recovery attack."""

from .fields import FieldTower, tower_create
from .linalg import Mat, NoSolutionError
from .rs import DecodingFailure, Locators
from .trs import ParameterError, TrsKey, TrsParams, make_params, relaxed_params, validate_params
from .mceliece import (Ciphertext, DecryptionFailure, FormatError, PrivateKey,
                       PublicKey, decrypt, encrypt, keygen)
from .attack import AttackError, NotRSCodeError, RecoveredKey, recover_key

__all__ = [
    "FieldTower", "tower_create", "Mat", "NoSolutionError", "DecodingFailure",
    "Locators", "ParameterError", "TrsKey", "TrsParams", "make_params",
    "relaxed_params", "validate_params", "Ciphertext", "DecryptionFailure",
    "FormatError", "PrivateKey", "PublicKey", "decrypt", "encrypt", "keygen",
    "AttackError", "NotRSCodeError", "RecoveredKey", "recover_key",
]
