"""Base definitions for processors"""

import logging
from abc import ABC, abstractmethod
from copy import deepcopy
from typing import Any

import voluptuous

_LOGGER = logging.getLogger(__name__)


class Processor(ABC):
    """A base class for processors.

    Input is deep-copied and, when the subclass declares a ``_SCHEMA``,
    validated before ``do_process`` runs.
    """

    _LABEL = "Processor"
    _SCHEMA: voluptuous.Schema | None = None

    def __init__(self, input_data: Any, auto: bool = True):
        """Init method."""
        self._input = deepcopy(input_data)
        if self._SCHEMA is not None:
            self._input = self._SCHEMA(self._input)
        self._output = None
        if auto:
            self.do_process()

    @abstractmethod
    def do_process(self):
        """The processing method."""

    @property
    def output(self):
        """An output property."""
        return deepcopy(self._output)
