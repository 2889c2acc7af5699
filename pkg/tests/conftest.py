"""Shared pipelines: the two demo algebras, built once per session."""

from __future__ import annotations

import importlib.resources

import pytest

from gshopf.bar import BarComplex, BarHomology, bar_basis, homology
from gshopf.presentation import AlgebraPresentation, parse_presentation


def load_data(name: str) -> str:
    return importlib.resources.files("gshopf.data").joinpath(name).read_text()


@pytest.fixture(scope="session")
def example4_algebra() -> AlgebraPresentation:
    return parse_presentation(load_data("example4.pres"), name="example4")


@pytest.fixture(scope="session")
def loopspace_algebra() -> AlgebraPresentation:
    return parse_presentation(load_data("loopspace.pres"), name="loopspace")


@pytest.fixture(scope="session")
def example4_bar(example4_algebra) -> BarComplex:
    return bar_basis(example4_algebra, cap=8)


@pytest.fixture(scope="session")
def loopspace_bar(loopspace_algebra) -> BarComplex:
    return bar_basis(loopspace_algebra, cap=8)


@pytest.fixture(scope="session")
def example4_H(example4_bar) -> BarHomology:
    bc = example4_bar
    return homology(bc, names={
        "alpha1": bc.el("[a2]"),
        "alpha2": bc.el("[a3]"),
        "beta2": bc.el("[b3]"),
        "gamma": bc.el("[a2|a3]", "[a3|a2]"),
    })


@pytest.fixture(scope="session")
def loopspace_H(loopspace_bar) -> BarHomology:
    bc = loopspace_bar
    return homology(bc, names={
        "alpha1": bc.el("[a2]"),
        "alpha2": bc.el("[a3]"),
        "beta": bc.el("[b]"),
        "gamma": bc.el("[a2|a3]", "[a3|a2]"),
    })


@pytest.fixture(scope="session")
def loopspace_transfer(loopspace_H):
    from gshopf.transfer import TransferState, transfer_order3, transfer_order4
    bc = loopspace_H.bar
    state = TransferState(
        loopspace_H, pins={(2, 1): {("beta", "beta"): bc.el("[a2|a3]")}})
    transfer_order3(state)
    transfer_order4(state)
    return state
