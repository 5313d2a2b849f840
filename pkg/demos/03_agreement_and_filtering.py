"""Score inter-annotation agreement and filter a training set with it.

Each line's score is 100 * (1 - mean normalized character distance) between
its transcriptions and their character-level consensus: 100 means perfect
agreement, lower means the readings disagree. Filtering drops low-agreement
train lines while never touching validation or test.
"""

from aggrescribe import (
    Corpus,
    SourceKind,
    Split,
    SplitAssignment,
    TranscribedLine,
    Transcription,
    TranscriptionSource,
    agreement_score,
    filter_by_agreement,
)

HUMAN = TranscriptionSource(SourceKind.HUMAN)
PYLAIA = TranscriptionSource(SourceKind.AUTO_PYLAIA)
DAN = TranscriptionSource(SourceKind.AUTO_DAN)


def line(line_id, *texts):
    sources = [HUMAN, HUMAN, PYLAIA, DAN][: len(texts)]
    return TranscribedLine(
        line_id=line_id,
        image_ref=f"images/{line_id}.png",
        transcriptions=tuple(Transcription(t, s) for t, s in zip(texts, sources)),
    )


corpus = Corpus(
    (
        line("clean", "nomination des membres", "nomination des membres",
             "nomination des membres", "nomination des membres"),
        line("typo", "le receveur présente son rapport", "le receveur présente son rapport",
             "le receveur presente son rapport", "le receveur présente son raport"),
        line("messy", "adjudication des travaux", "les travaux de voirie",
             "adjudication travaux", "adjudmication des travaur"),
    )
)

print("Agreement scores:")
scores = {}
for entry in corpus:
    scores[entry.line_id] = agreement_score(entry)
    print(f"  {entry.line_id:<6} {scores[entry.line_id]:6.2f}")

# Filter the corpus at increasing thresholds; retention shrinks monotonically
# and only train lines are ever dropped.
splits = {lid: SplitAssignment(lid, Split.TRAIN) for lid in scores}
splits["clean"] = SplitAssignment("clean", Split.TEST)

print("\nThreshold sweep (train lines retained):")
for threshold in (0, 90, 97, 99):
    kept = filter_by_agreement(corpus, scores, threshold, splits)
    train_kept = [l.line_id for l in kept if splits[l.line_id].split is Split.TRAIN]
    print(f"  >= {threshold:>3}%: {train_kept} (+ test line 'clean' always kept)")
