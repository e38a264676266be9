"""Loading review, inspection and link files, and labelling reviews.

File formats
------------
reviews
    JSON lines, one object per line with ``review_id``, ``business_id``,
    ``date`` (ISO-8601 calendar date), ``text`` and optional ``stars``.
inspections
    CSV with header ``facility_id,date,action``; ``action`` is one of
    ``Y/N/true/false/1/0`` (case-insensitive).
links
    CSV with header ``business_id,facility_id``.
"""

from __future__ import annotations

import bisect
import csv
import datetime as dt
import enum
import json
import logging
from dataclasses import dataclass
from pathlib import Path

log = logging.getLogger(__name__)


class DataError(ValueError):
    """Raised for malformed or inconsistent input data."""


class Label(str, enum.Enum):
    ACTION = "Action"
    NO_ACTION = "NoAction"

    def __str__(self) -> str:
        return self.value

    @property
    def sign(self) -> int:
        return 1 if self is Label.ACTION else -1


@dataclass(frozen=True)
class RawReview:
    review_id: str
    business_id: str
    date: dt.date
    text: str
    stars: int | None = None


@dataclass(frozen=True)
class InspectionRecord:
    facility_id: str
    date: dt.date
    action: bool


@dataclass(frozen=True)
class FacilityLink:
    business_id: str
    facility_id: str


@dataclass(frozen=True)
class LabeledDocument:
    doc_id: str
    text: str
    label: Label
    business_id: str


@dataclass(frozen=True)
class LinkResult:
    documents: list[LabeledDocument]
    dropped_unlinked: int
    dropped_unmatched: int

    @property
    def dropped(self) -> int:
        return self.dropped_unlinked + self.dropped_unmatched


REVIEW_FIELDS = ("review_id", "business_id", "date", "text")
ACTION_VALUES = {
    "y": True, "true": True, "1": True,
    "n": False, "false": False, "0": False,
}


def _read_text(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from exc


def _parse_date(value: str) -> dt.date:
    return dt.date.fromisoformat(value.strip())


def load_reviews(path) -> list[RawReview]:
    reviews = []
    seen = set()
    for lineno, line in enumerate(_read_text(path).splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"line {lineno}: invalid JSON ({exc.msg})") from None
        if not isinstance(obj, dict):
            raise DataError(f"line {lineno}: expected an object")
        for field in REVIEW_FIELDS:
            if field not in obj:
                raise DataError(f"line {lineno}: missing field {field}")
        review_id = str(obj["review_id"])
        if not review_id:
            raise DataError(f"line {lineno}: empty review_id")
        if review_id in seen:
            raise DataError(f"line {lineno}: duplicate review_id {review_id}")
        seen.add(review_id)
        try:
            date = _parse_date(str(obj["date"]))
        except ValueError:
            raise DataError(f"line {lineno}: invalid date") from None
        stars = obj.get("stars")
        if stars is not None:
            if not isinstance(stars, int) or isinstance(stars, bool) or not 1 <= stars <= 5:
                raise DataError(f"line {lineno}: stars must be an integer 1..5")
        text = str(obj["text"])
        if not text.strip():
            log.warning("line %d: review %s has empty text", lineno, review_id)
        reviews.append(RawReview(review_id, str(obj["business_id"]), date, text, stars))
    return reviews


def _read_csv(path, header: tuple[str, ...]) -> list[dict[str, str]]:
    reader = csv.DictReader(_read_text(path).splitlines())
    fieldnames = [name.strip() for name in reader.fieldnames or []]
    if any(h not in fieldnames for h in header):
        raise DataError(f"{path}: header must contain {','.join(header)}")
    reader.fieldnames = fieldnames
    return list(reader)


def load_inspections(path) -> list[InspectionRecord]:
    records = []
    # data rows are numbered from 2 (row 1 is the header)
    for rowno, row in enumerate(_read_csv(path, ("facility_id", "date", "action")), start=2):
        facility = (row["facility_id"] or "").strip()
        if not facility:
            raise DataError(f"row {rowno}: empty facility_id")
        try:
            date = _parse_date(row["date"] or "")
        except ValueError:
            raise DataError(f"row {rowno}: invalid date") from None
        raw = (row["action"] or "").strip().lower()
        if raw not in ACTION_VALUES:
            raise DataError(f"row {rowno}: unknown action value {row['action']!r}")
        records.append(InspectionRecord(facility, date, ACTION_VALUES[raw]))
    return records


def load_links(path) -> list[FacilityLink]:
    links = []
    by_business: dict[str, str] = {}
    for rowno, row in enumerate(_read_csv(path, ("business_id", "facility_id")), start=2):
        business = (row["business_id"] or "").strip()
        facility = (row["facility_id"] or "").strip()
        if not business or not facility:
            raise DataError(f"row {rowno}: empty business_id or facility_id")
        if business in by_business:
            if by_business[business] == facility:
                raise DataError(f"row {rowno}: duplicate link {business},{facility}")
            raise DataError(f"row {rowno}: business {business} linked to more than one facility")
        by_business[business] = facility
        links.append(FacilityLink(business, facility))
    return links


def link_and_label(reviews, inspections, links, window_days: int = 365) -> LinkResult:
    """Label each review by the nearest inspection on or after its date.

    A review is kept when its business is linked to a facility that has an
    inspection dated within ``[review.date, review.date + window_days]``;
    the earliest such inspection decides the label. Ties on the same date
    resolve to Action when any of them required action.
    """
    if window_days < 0:
        raise ValueError("window_days must be >= 0")
    if not links:
        raise DataError("link table is empty; no review can be labelled")

    facility_of = {link.business_id: link.facility_id for link in links}

    by_facility: dict[str, dict[dt.date, bool]] = {}
    for rec in inspections:
        dates = by_facility.setdefault(rec.facility_id, {})
        dates[rec.date] = dates.get(rec.date, False) or rec.action
    timelines = {
        fac: (sorted(dates), dates) for fac, dates in by_facility.items()
    }

    docs = []
    unlinked = unmatched = 0
    window = dt.timedelta(days=window_days)
    for review in reviews:
        facility = facility_of.get(review.business_id)
        if facility is None:
            unlinked += 1
            continue
        timeline = timelines.get(facility)
        if timeline is None:
            unmatched += 1
            continue
        dates, actions = timeline
        pos = bisect.bisect_left(dates, review.date)
        if pos == len(dates) or dates[pos] > review.date + window:
            unmatched += 1
            continue
        label = Label.ACTION if actions[dates[pos]] else Label.NO_ACTION
        docs.append(LabeledDocument(review.review_id, review.text, label, review.business_id))

    if unlinked or unmatched:
        log.info("dropped %d unlinked and %d unmatched reviews", unlinked, unmatched)
    return LinkResult(docs, unlinked, unmatched)
