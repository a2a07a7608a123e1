#!/usr/bin/env python3
"""
Setup script for fraccomp
"""

from setuptools import setup, find_packages
import os

def read_requirements():
    """Read requirements from requirements.txt"""
    with open('requirements.txt', 'r') as f:
        return [line.strip() for line in f if line.strip() and not line.startswith('#')]

def read_readme():
    """Read README for long description"""
    if os.path.exists('README.md'):
        with open('README.md', 'r', encoding='utf-8') as f:
            return f.read()
    return "fraccomp - space-time fractional problems by stochastic composition"

setup(
    name="fraccomp",
    version="0.1.0",
    description="Space-time fractional evolution equations solved by stochastic composition of kernels",
    long_description=read_readme(),
    long_description_content_type="text/markdown",
    author="fraccomp developers",
    packages=find_packages(exclude=["tests", "tests.*"]),
    py_modules=["main"],
    python_requires=">=3.10",
    install_requires=read_requirements(),
    entry_points={
        'console_scripts': [
            'fraccomp=main:main',
        ],
    },
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.10",
        "Programming Language :: Python :: 3.11",
        "Topic :: Scientific/Engineering :: Mathematics",
    ],
    include_package_data=True,
    zip_safe=False,
)
