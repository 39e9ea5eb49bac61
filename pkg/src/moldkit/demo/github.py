"""Fixture-backed wrappers over GitHub organization data.

The fixtures are committed snapshots shaped like the public API documents
(an organization document plus its repository listing); nothing here talks
to the network. Wrapping the parsed JSON gives each document a domain type
that can carry views, and nested accessors turn path navigation into domain
navigation: an organization's ``repositories`` is a group of repository
wrappers, a repository's ``owner`` is a user wrapper.
"""

from __future__ import annotations

from pathlib import Path
from typing import Optional

from ..core import ColumnedList, Text, view
from ..wrappers import DataWrapper, accessor, load_fixture

FIXTURES_DIR = Path(__file__).parent / "fixtures"


class GhUser(DataWrapper):
    login = accessor("/login")
    url = accessor("/html_url")

    def __repr__(self):
        return f"<GhUser {self.login}>"

    @view("profile", kind="text", title="Profile", priority=10)
    def profile_view(self):
        return Text(f"{self.login} ({self.url})")


class GhRepository(DataWrapper):
    name = accessor("/name")
    description = accessor("/description")
    stars = accessor("/stargazers_count")
    language = accessor("/language")
    owner = accessor("/owner", wraps=GhUser)

    def __repr__(self):
        return f"<GhRepository {self.name}>"

    @view("summary", kind="text", title="Summary", priority=10)
    def summary_view(self):
        return Text(f"{self.name}: {self.description or 'no description'}\n"
                    f"language: {self.language}, stars: {self.stars}")


class GhOrganization(DataWrapper):
    login = accessor("/login")
    name = accessor("/name")
    description = accessor("/description")
    public_repos = accessor("/public_repos")
    repositories = accessor("/repos", wraps=GhRepository)

    def __repr__(self):
        return f"<GhOrganization {self.login}>"

    @view("profile", kind="text", title="Profile", priority=10)
    def profile_view(self):
        return Text(f"{self.name} ({self.login})\n{self.description}\n"
                    f"public repositories: {self.public_repos}")

    @view("repositories", kind="columned_list", title="Repositories", priority=20)
    def repositories_view(self):
        return ColumnedList(
            columns=["Name", "Language", "Stars"],
            items=list(self.repositories or ()),
            cells=lambda r: [str(r.name), str(r.language), str(r.stars)],
        )


def load_demo_organization(fixtures_root: Optional[Path] = None) -> GhOrganization:
    """The demo organization assembled from the committed snapshots.

    The repository listing lives in its own fixture (mirroring the separate
    API endpoint); it is merged under ``repos`` so the nested accessor can
    reach it. A refresh script would rebuild both files the same way.
    """
    root = Path(fixtures_root) if fixtures_root else FIXTURES_DIR
    org_doc = load_fixture(root / "github" / "feenkcom.json")
    repos_doc = load_fixture(root / "github" / "feenkcom_repos.json")
    return GhOrganization({**org_doc, "repos": repos_doc})
