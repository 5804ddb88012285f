"""Published evaluation counts used as test fixtures.

DETECTION_ROWS: (passengers, actual, detected, missed, percentage) from the
reference evaluation of this pipeline. The passenger column is metadata;
ground truth is the actual-faces column.

COMPARISON_ROWS: numbers reported for other counting systems, kept only as
fixtures; their percentage column follows those systems' own rounding and
is never asserted against our truncation metric.
"""

DETECTION_ROWS = [
    (27, 25, 24, 1, 96),
    (32, 32, 30, 2, 93),
    (38, 36, 34, 2, 94),
    (43, 43, 41, 2, 95),
    (49, 49, 45, 4, 91),
    (55, 53, 48, 5, 90),
]

DETECTION_PAIRS = [(actual, detected) for _, actual, detected, _, _ in DETECTION_ROWS]
DETECTION_PERCENTAGES = [pct for *_, pct in DETECTION_ROWS]

COMPARISON_ROWS = {
    "hog": [(113, 109, 4, 96), (114, 104, 10, 91)],
    "hough_fuzzy": [
        (123, 110, 13, 88),
        (27, 23, 4, 82),
        (50, 47, 3, 93),
        (33, 31, 2, 93),
        (233, 211, 22, 89),
    ],
}
