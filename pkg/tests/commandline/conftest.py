"""Commandline specific pytest setup."""
from __future__ import annotations

import logging
from typing import TYPE_CHECKING

import pytest

if TYPE_CHECKING:
    from collections.abc import Iterator


@pytest.fixture(autouse=True)
def _drop_application_handlers() -> Iterator[None]:
    """Remove the stream handler init_logger installs, it holds the captured stderr."""
    yield
    root = logging.getLogger()
    for handler in root.handlers[:]:
        if type(handler) is logging.StreamHandler:
            root.removeHandler(handler)
