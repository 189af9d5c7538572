#!/usr/bin/env python
# -*- coding: utf-8 -*-

import io
import os

from setuptools import find_packages, setup

# Package meta-data.
NAME = "dpistab"
DESCRIPTION = (
    "Nonlinear stability analysis of discrete Picard iteration: borders, "
    "perturbation amplitudes, brute-force scans and PDE bounds"
)
AUTHOR = "dpistab developers"
REQUIRES_PYTHON = ">=3.10.0"
VERSION = "0.3.1"

# What packages are required for this module to be executed?
REQUIRED = [
    "numpy>=1.23",
    "scipy>=1.9",
    "voluptuous>=0.13.1",
    "Jinja2>=3.1.2",
    "freezegun>=1.2.1",
    "pytest>=7.1.2",
    "pytest-order>=1.0.1",
]

# What packages are optional?
EXTRAS = {
    # 'plots': ['matplotlib'],
}

here = os.path.abspath(os.path.dirname(__file__))

# Import the README and use it as the long-description.
try:
    with io.open(os.path.join(here, "README.md"), encoding="utf-8") as f:
        long_description = "\n" + f.read()
except FileNotFoundError:
    long_description = DESCRIPTION


# Where the magic happens:
setup(
    name=NAME,
    version=VERSION,
    description=DESCRIPTION,
    long_description=long_description,
    long_description_content_type="text/markdown",
    author=AUTHOR,
    python_requires=REQUIRES_PYTHON,
    packages=find_packages(exclude=["tests", "*.tests", "*.tests.*", "tests.*"]),
    entry_points={
        "console_scripts": ["dpistab=dpistab.cli:main"],
    },
    install_requires=REQUIRED,
    extras_require=EXTRAS,
    include_package_data=True,
    license="GPLv3",
    classifiers=[
        # Trove classifiers
        # Full list: https://pypi.python.org/pypi?%3Aaction=list_classifiers
        "License :: OSI Approved :: GNU General Public License v3 (GPLv3)",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Programming Language :: Python :: 3.12",
        "Programming Language :: Python :: Implementation :: CPython",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
)
