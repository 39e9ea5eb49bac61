"""From parsed JSON to a navigable domain model.

A dictionary of organization data answers queries the way a filing cabinet
does: everything is in there somewhere. Wrapping it in a domain type keeps
the raw value untouched (same object, by identity) while accessors map
paths to names, nested accessors wrap what they find, and list-valued
accessors come back as collection groups that still behave like
collections.

Run: python demos/03_wrapping_raw_data.py
"""

from moldkit import HandleSpace, discover_views, raw_of, render_view
from moldkit.demo.github import load_demo_organization

org = load_demo_organization()
print(f"Wrapped: {org!r}")
print(f"raw_of(org) is the very dict we parsed: "
      f"{isinstance(raw_of(org), dict)}")

print(f"\nAccessors read through paths:")
print(f"  login        -> {org.login}")
print(f"  description  -> {org.description}")
print(f"  public_repos -> {org.public_repos}")

repos = org.repositories
print(f"\nNested wrapping: org.repositories is a {type(repos).__name__} "
      f"of {repos.element_kind_name}")
for repo in repos:
    print(f"  {repo.name:<10} {repo.language:<10} "
          f"{repo.stars} stars, owner {repo.owner.login}")

print("\nGroups forward the collection protocol:")
print(f"  len(repos) == {len(repos)}; "
      f"smalltalk only: {[r.name for r in repos.filter(lambda r: r.language == 'Smalltalk')]}")

print("\nAnd the wrapper carries its own views like any domain object:")
space = HandleSpace(prefix="demo")
subject = space.register(org, "root")
print("  views:", [s.view_id for s in discover_views(space, subject)])
table = render_view(space, subject, "repositories")
print("  repositories view:", table.columns, f"{table.total_count} rows")
