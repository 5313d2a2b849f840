"""Consensus over noisy transcriptions of the same handwritten line.

Several annotators (and two HTR models) read the same image differently;
folding their token sequences into a lattice and voting per slot recovers a
cleaner text than any single reading.
"""

from aggrescribe import Granularity, rover_consensus

readings = [
    "le conseil municipal approuve le budget",
    "le consei1 municipal approuve le budget",
    "le conseil nunicipal approuve le budjet",
    "le conseil municipal aprouve le budget",
]

print("Input readings:")
for text in readings:
    print(f"  {text!r}")

# Character-level voting: every slot holds the competing characters, and the
# plurality wins. None of the typos survives because each appears only once.
result = rover_consensus(readings, Granularity.CHARACTER)
print(f"\nCharacter-level consensus: {result.text!r}")

# Peek at a contested slot: position 9 ('l' vs '1').
slot = result.lattice.slots[9]
print(f"Slot 9 votes: {dict(slot)} -> winner {result.per_slot_winner[9]!r}")

# The same machinery works on words. Word-level voting fixes whole-word
# disagreements but cannot repair a typo inside a word nobody else made.
words = rover_consensus(readings, Granularity.WORD)
print(f"\nWord-level consensus: {words.text!r}")

# Properties worth knowing: unanimous input passes through unchanged, and a
# consensus is a fixed point of the voting itself.
assert rover_consensus(["bonjour"] * 3).text == "bonjour"
assert rover_consensus([result.text] * 3).text == result.text
print("\nUnanimity and idempotence hold.")
