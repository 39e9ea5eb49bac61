"""Refresh the committed GitHub fixtures from the live API.

Optional maintenance script; nothing in the build or the tests touches the
network. It fetches the organization document and its repository listing
and rewrites the two snapshot files the demo loads.

Run: python scripts/refresh_github_fixtures.py [org] [--out DIR]
"""

import argparse
import json
import sys
import urllib.request
from pathlib import Path

API = "https://api.github.com"
DEFAULT_OUT = Path(__file__).parent.parent / "src" / "moldkit" / "demo" / \
    "fixtures" / "github"

ORG_KEYS = [
    "login", "id", "url", "repos_url", "events_url", "description", "name",
    "company", "blog", "location", "email", "is_verified",
    "has_organization_projects", "public_repos", "public_gists", "followers",
    "following", "html_url", "created_at", "type",
]
REPO_KEYS = ["id", "name", "full_name", "description", "language",
             "stargazers_count", "forks_count", "html_url"]
OWNER_KEYS = ["login", "id", "html_url", "type"]


def fetch(path):
    request = urllib.request.Request(
        API + path, headers={"Accept": "application/vnd.github+json",
                             "User-Agent": "moldkit-fixture-refresh"})
    with urllib.request.urlopen(request, timeout=30) as response:
        return json.load(response)


def trim(doc, keys):
    return {k: doc.get(k) for k in keys}


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("org", nargs="?", default="feenkcom")
    parser.add_argument("--out", type=Path, default=DEFAULT_OUT)
    args = parser.parse_args()

    org = trim(fetch(f"/orgs/{args.org}"), ORG_KEYS)
    repos = []
    for repo in fetch(f"/orgs/{args.org}/repos?per_page=10&sort=updated"):
        slim = trim(repo, REPO_KEYS)
        slim["owner"] = trim(repo.get("owner", {}), OWNER_KEYS)
        repos.append(slim)

    args.out.mkdir(parents=True, exist_ok=True)
    (args.out / f"{args.org}.json").write_text(
        json.dumps(org, ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8")
    (args.out / f"{args.org}_repos.json").write_text(
        json.dumps(repos, ensure_ascii=False, indent=2) + "\n",
        encoding="utf-8")
    print(f"wrote {args.org}.json and {args.org}_repos.json to {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
