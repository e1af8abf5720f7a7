#!/usr/bin/env python3
"""Setup script for the fracsub library and CLI"""

from setuptools import setup, find_packages
from pathlib import Path

# Read README
readme_path = Path(__file__).parent / "README.md"
long_description = readme_path.read_text() if readme_path.exists() else ""

setup(
    name="fracsub",
    version="0.1.0",
    description=("Finite-difference solvers for multi-term time-fractional subdiffusion "
                 "equations with memory"),
    long_description=long_description,
    long_description_content_type="text/markdown",
    author="fracsub contributors",

    # Package configuration
    packages=find_packages(where="src"),
    package_dir={"": "src"},

    # Dependencies
    install_requires=[
        "numpy>=1.24",
        "scipy>=1.10",
        "mpmath>=1.3",
        "pandas>=1.5",
        "click>=8.1",
        "rich>=13.0.0",
        "pyyaml>=6.0",
        "pydantic>=2.0.0",
    ],

    # Optional dependencies
    extras_require={
        "dev": [
            "pytest>=7.0.0",
            "pytest-cov>=4.0.0",
            "black>=22.0.0",
            "flake8>=4.0.0",
        ],
    },

    # CLI scripts
    entry_points={
        "console_scripts": [
            "fracsub=fracsub.cli:main",
        ],
    },

    # Metadata
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
    ],

    python_requires=">=3.9",

    # Include additional files
    include_package_data=True,
    zip_safe=False,
)
