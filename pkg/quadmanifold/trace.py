from dataclasses import dataclass
from typing import List, Tuple


@dataclass
class EpochRecord:
    epoch: int
    data: float
    penalty: float
    total: float
    seconds: float


class TrainTrace:
    """Per-epoch record of a fit: mean data term, raw penalty, total loss and wall time"""

    COLUMNS = ("epoch", "data", "penalty", "total", "seconds")

    def __init__(self):
        self.records: List[EpochRecord] = []

    def add_epoch(self, epoch: int, data: float, penalty: float, total: float, seconds: float) -> EpochRecord:
        record = EpochRecord(epoch, float(data), float(penalty), float(total), float(seconds))
        self.records.append(record)
        return record

    def __len__(self) -> int:
        return len(self.records)

    @property
    def data(self) -> List[float]:
        return [r.data for r in self.records]

    @property
    def penalty(self) -> List[float]:
        return [r.penalty for r in self.records]

    @property
    def total(self) -> List[float]:
        return [r.total for r in self.records]

    @property
    def final_penalty(self) -> float:
        return self.records[-1].penalty if self.records else float("nan")

    def window_means(self, width: int = 10) -> List[float]:
        """Average total loss over consecutive non-overlapping windows"""
        totals = self.total
        return [sum(totals[i:i + width]) / width for i in range(0, len(totals) - width + 1, width)]

    def to_rows(self) -> List[Tuple[int, float, float, float, float]]:
        return [(r.epoch, r.data, r.penalty, r.total, r.seconds) for r in self.records]
