#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from setuptools import setup, find_packages

setup(
    name='osctorch',
    version='0.1a.dev',
    description='Coupled harmonic oscillators on networks, in PyTorch',
    packages=find_packages(exclude=['examples', 'examples.*']),
    install_requires=['torch>=1.8',
                      'appdirs',         # < used to locate network data
                      'numpy', 'scipy',  # < csv i/o, reference checks
                      ],
    extras_require={'test': ['pytest']},
    python_requires='>=3.8',
    entry_points={'console_scripts': ['osctorch=osctorch.cli:main']},
)
