#!/usr/bin/env python3
"""Download the published SocioPatterns contact recordings.

The experiment harness and the acceptance suite run against four deployment
recordings.  This script fetches the public files and stores them, unpacked,
under the chosen data directory with the names the toolkit expects:

    highschool.dat   High school 2013 (327 badges)
    conference.dat   SFHH conference 2009 (403 badges)
    hospital.dat     Hospital ward, Lyon (75 badges)
    workplace.dat    Office building 2015 (217 badges)

Needs plain outbound HTTP(S).  In environments without it, the toolkit
falls back to its bundled synthetic stand-ins (tempodia.synthetic), which
match the node and edge counts above but are not the real recordings.

The URLs below are the canonical ones at the time of writing; the hosting
site occasionally reorganises its archive, so adjust them if a download
404s (each dataset's page on sociopatterns.org links the current file).
"""

from __future__ import annotations

import argparse
import gzip
import os
import shutil
import sys
import urllib.request

URLS = {
    "highschool.dat": "http://www.sociopatterns.org/wp-content/uploads/2015/07/High-School_data_2013.csv.gz",
    "conference.dat": "http://www.sociopatterns.org/wp-content/uploads/2018/12/tij_SFHH.dat_.gz",
    "hospital.dat": "http://www.sociopatterns.org/wp-content/uploads/2013/09/detailed_list_of_contacts_Hospital.dat_.gz",
    "workplace.dat": "http://www.sociopatterns.org/wp-content/uploads/2018/12/tij_InVS15.dat_.gz",
}


def fetch(url: str, dest: str) -> None:
    tmp = dest + ".download"
    print(f"  {url}")
    with urllib.request.urlopen(url, timeout=60) as response, open(tmp, "wb") as out:
        shutil.copyfileobj(response, out)
    if url.endswith(".gz"):
        with gzip.open(tmp, "rb") as packed, open(dest, "wb") as out:
            shutil.copyfileobj(packed, out)
        os.remove(tmp)
    else:
        os.replace(tmp, dest)
    print(f"  -> {dest}")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--data-dir",
        default=os.environ.get("TEMPODIA_DATA_DIR", "data"),
        help="destination directory (default: $TEMPODIA_DATA_DIR or ./data)",
    )
    parser.add_argument(
        "--force", action="store_true", help="re-download files that already exist"
    )
    args = parser.parse_args()
    os.makedirs(args.data_dir, exist_ok=True)
    failures = 0
    for name, url in URLS.items():
        dest = os.path.join(args.data_dir, name)
        if os.path.exists(dest) and not args.force:
            print(f"{name}: already present, skipping")
            continue
        print(f"{name}:")
        try:
            fetch(url, dest)
        except OSError as exc:
            print(f"  failed: {exc}", file=sys.stderr)
            failures += 1
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
