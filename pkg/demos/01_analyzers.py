"""Tour of the four text analyzers.

Run with: python demos/01_analyzers.py
"""

from quarry.analysis import AnalyzerConfig, analyze

samples = [
    "The Quick, Brown Fox!",
    "Shane Black",
    "Robert-Downey Jr.",
    "human bomb",
]

# standard: word boundaries, lowercased, English stopwords dropped.
# whitespace: split on whitespace runs, case kept.
# simple: split on anything that is not a letter, lowercased.
# n_gram: whitespace-split, then all character trigrams per token.
for name in ("standard", "whitespace", "simple", "n_gram"):
    config = AnalyzerConfig(name=name)
    print(f"--- {name} ---")
    for text in samples:
        print(f"  {text!r:28} -> {analyze(config, text)}")

# Gram sizes are tunable (minimum 3). Short tokens pass through whole.
wide = AnalyzerConfig(name="n_gram", min_gram=3, max_gram=4)
print("\nn_gram(3,4) on 'bomb':", analyze(wide, "bomb"))
print("n_gram(3,3) on 'go':  ", analyze(AnalyzerConfig(name="n_gram"), "go"))
