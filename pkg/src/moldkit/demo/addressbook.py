"""Address book demo: substring searches over people and addresses.

The book keeps its entries in collection groups and reuses their item views
through forward views, so the book itself stays a thin domain object.
"""

from __future__ import annotations

from ..core import Forward, Text, search, substring_match, view
from ..wrappers import CollectionGroup


class Person:
    def __init__(self, name: str):
        self.name = name

    def __repr__(self):
        return f"<Person {self.name}>"

    @view("card", kind="text", title="Card", priority=10)
    def card_view(self):
        return Text(f"Name: {self.name}")


class Address:
    def __init__(self, street: str, city: str):
        self.street = street
        self.city = city

    def __repr__(self):
        return f"<Address {self.street}, {self.city}>"


class PersonGroup(CollectionGroup):
    default_element_kind = Person
    default_label = "people"


class AddressGroup(CollectionGroup):
    default_element_kind = Address
    default_label = "addresses"


class AddressBook:
    def __init__(self, people=(), addresses=()):
        self.people = PersonGroup(list(people))
        self.addresses = AddressGroup(list(addresses))

    def __repr__(self):
        return (f"<AddressBook {len(self.people)} people, "
                f"{len(self.addresses)} addresses>")

    @view("people", kind="forward", title="People", priority=10)
    def people_view(self):
        return Forward(self.people, "items")

    @view("addresses", kind="forward", title="Addresses", priority=20)
    def addresses_view(self):
        return Forward(self.addresses, "items")

    @search("people", label="People", element_kind=Person)
    def people_search(self, query: str):
        return PersonGroup([p for p in self.people
                            if substring_match(query, p.name)],
                           label=f"people:{query}")

    @search("addresses", label="Addresses", element_kind=Address)
    def addresses_search(self, query: str):
        return AddressGroup(
            [a for a in self.addresses
             if substring_match(query, a.street) or substring_match(query, a.city)],
            label=f"addresses:{query}")


def demo_address_book() -> AddressBook:
    return AddressBook(
        people=[Person("Anna"), Person("Jan"), Person("Bob"),
                Person("Mirjam"), Person("Santiago")],
        addresses=[Address("Bahnhofstrasse 5", "Wabern"),
                   Address("Main Street 12", "Springfield"),
                   Address("Quai des Bergues 3", "Geneva")],
    )
