"""Check every bundled derivation and print the theorem or the first error."""

from tdstit.proofcheck import (DerivationError, bundled_derivations, check_derivation,
                               load_derivation)
from tdstit.syntax import to_text

for name, path in bundled_derivations().items():
    d = load_derivation(path)
    try:
        theorem = check_derivation(d)
        print(f"{name:<20} ok      {to_text(theorem)}")
    except DerivationError as e:
        print(f"{name:<20} error   {e}")
