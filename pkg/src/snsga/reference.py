"""Published figures used for side-by-side reporting.

``PUBLISHED_EVALUATIONS`` is the average-evaluation-count comparison table
(None where no figure was published); ``PUBLISHED_SNSGA`` holds the
per-benchmark success rate, mean evaluations and mean gap claimed for
SNSGA.  Algorithm and benchmark labels are kept as printed.
"""

BENCHMARK_COLUMNS = ("RC", "GP", "B2", "SH", "R2", "Z2", "H34", "S45")

COLUMN_LABELS = {
    "RC": "RC", "GP": "GP", "B2": "B_2", "SH": "SH", "R2": "R_2", "Z2": "Z_2",
    "H34": "H_{3,4}", "S45": "S_{4,5}", "R5": "R_5", "R10": "R_{10}",
}

_ = None
PUBLISHED_EVALUATIONS = {
    #                RC    GP    B2   SH    R2   Z2     H34   S45
    "CHA":       (295, 259, 132, 345, 459, 215, 492, 598),
    "ECTS":      (245, 231, 210, 370, 480, 195, 548, 825),
    "CGA":       (620, 410, 320, 575, 960, 620, 582, 610),
    "ESA":       (_, 783, _, _, 796, 15820, 698, 1137),
    "CRTS min":  (41, 171, _, _, _, _, 609, 664),
    "CRTSave":   (38, 248, _, _, _, _, 513, 812),
    "TS":        (492, 486, _, 727, _, _, 508, _),
    "INTEROPT":  (4172, 6375, _, _, _, _, 1113, 3700),
    "NM-GA":     (356, 422, 529, 1009, 738, 339, 688, 2366),
    "NM-PSO":    (230, 304, 325, 753, 440, 186, 436, 850),
    "SNSGA":     (109, 124, 94, 206, 189, 227, 185, 345),
}
del _

# benchmark -> (success rate %, mean evaluations, mean gap)
PUBLISHED_SNSGA = {
    "RC": (100, 109, 1e-6),
    "GP": (100, 124, 8e-5),
    "B2": (100, 94, 1e-6),
    "SH": (100, 206, 5.5e-5),
    "R2": (100, 189, 4e-6),
    "Z2": (100, 227, 5e-6),
    "H34": (100, 185, 1.35e-4),
    "S45": (98, 345, 7e-5),
    "R5": (100, 105, 3e-5),
    "R10": (100, 148, 9e-5),
}


class ReferenceTable:
    """Lookup over the published evaluation counts."""

    def __init__(self, evaluations=None, snsga=None):
        self.evaluations = dict(PUBLISHED_EVALUATIONS if evaluations is None else evaluations)
        self.snsga = dict(PUBLISHED_SNSGA if snsga is None else snsga)

    @property
    def algorithms(self):
        return list(self.evaluations)

    def has(self, benchmark: str) -> bool:
        return benchmark in BENCHMARK_COLUMNS or benchmark in self.snsga

    def column(self, benchmark: str) -> dict:
        """``{algorithm: evaluations or None}`` for one benchmark column."""
        if benchmark not in BENCHMARK_COLUMNS:
            return {}
        j = BENCHMARK_COLUMNS.index(benchmark)
        return {alg: row[j] for alg, row in self.evaluations.items()}

    def value(self, algorithm: str, benchmark: str):
        return self.column(benchmark).get(algorithm)
