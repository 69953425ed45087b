"""
Converting a CDC daily PM2.5 export to a date,value series
==========================================================

The reference record is the daily fine particulate matter (PM2.5) estimate
for New York County (Manhattan), 2001-01-01 to 2016-12-31, 5844 days.  It is
not downloaded automatically because the terms of access may change.

Manual fetch
------------
1. Open the CDC WONDER "Fine Particulate Matter (PM2.5)" daily data request
   page (https://wonder.cdc.gov/) and accept the data use terms.
2. Group results by Day; restrict the location to New York County, NY and
   the dates to 2001-01-01 .. 2016-12-31.
3. Ask for the average daily PM2.5 measure and export the results as a
   tab-delimited text file.

Conversion
----------
    python demos/cdc_to_series.py export.txt pm25_manhattan.csv

The date and value columns are found by name (a column containing "day" or
"date" and one containing "pm" or "particulate"); override with --date-column
and --value-column.  Footnote rows and blank lines are dropped.  The output
goes through the package reader, so gaps or duplicates are reported with
their row number.
"""

import argparse
import csv
import datetime as dt
import sys

from vbpbb import ingest_csv

DATE_FORMATS = ("%Y-%m-%d", "%b %d, %Y", "%m/%d/%Y", "%Y/%m/%d", "%d-%b-%Y")


def parse_date(text):
    text = text.strip().strip('"')
    for fmt in DATE_FORMATS:
        try:
            return dt.datetime.strptime(text, fmt).date()
        except ValueError:
            pass
    return None


def pick(header, wanted, keys):
    if wanted:
        return header.index(wanted)
    for i, name in enumerate(header):
        if any(k in name.lower() for k in keys):
            return i
    raise SystemExit(f"no column matching {keys} in {header}")


def convert(src, dst, date_column=None, value_column=None):
    with open(src, newline="", encoding="utf-8-sig") as fh:
        sample = fh.read(4096)
        fh.seek(0)
        dialect = csv.Sniffer().sniff(sample, delimiters="\t,;")
        rows = list(csv.reader(fh, dialect))
    header = [h.strip() for h in rows[0]]
    di = pick(header, date_column, ("date", "day"))
    vi = pick(header, value_column, ("pm", "particulate"))
    out = []
    for row in rows[1:]:
        if len(row) <= max(di, vi):
            continue
        day = parse_date(row[di])
        value = row[vi].strip().strip('"')
        if day is None or not value:
            continue
        out.append((day, value))
    out.sort()
    with open(dst, "w", newline="") as fh:
        fh.write("date,value\n")
        for day, value in out:
            fh.write(f"{day.isoformat()},{value}\n")
    return ingest_csv(dst)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    ap.add_argument("export")
    ap.add_argument("out")
    ap.add_argument("--date-column")
    ap.add_argument("--value-column")
    args = ap.parse_args()
    series = convert(args.export, args.out, args.date_column, args.value_column)
    print(f"{series.n} days from {series.start_date} to {series.date_at(series.n)}")
    if series.n != 5844:
        print("note: the reference record has 5844 days", file=sys.stderr)
