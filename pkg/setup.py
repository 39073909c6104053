# "fochlab" - A numerical laboratory for a fifth-order Camassa-Holm type
# equation.
# Copyright (C) 2026  The fochlab developers
#
# This program is free software: you can redistribute it and/or modify
# it under the terms of the GNU General Public License as published by
# the Free Software Foundation, either version 3 of the License, or
# (at your option) any later version.
#
# This program is distributed in the hope that it will be useful,
# but WITHOUT ANY WARRANTY; without even the implied warranty of
# MERCHANTABILITY or FITNESS FOR A PARTICULAR PURPOSE.  See the
# GNU General Public License for more details.
#
# You should have received a copy of the GNU General Public License
# along with this program.  If not, see <http://www.gnu.org/licenses/>.

""" Setup file for fochlab. """
from setuptools import setup
import os
import fochlab


def read(fname):
    """ Read a file. """
    with open(os.path.join(os.path.dirname(__file__), fname)) as file:
        return file.read()

setup(
    name='fochlab',
    version=fochlab.__version__,
    author=fochlab.__author__,
    description=('A numerical laboratory for a fifth-order Camassa-Holm type '
                 'equation: solver, norms, blow-up certificates and norm '
                 'inflation'),
    license='GPLv3+',
    long_description=read('README.rst'),
    packages=['fochlab', 'fochlab.commands', 'fochlab.logic'],
    scripts=['bin/fochlab'],
    python_requires='>=3.8',
    install_requires=['PyYAML>=5.1',
                      'numpy>=1.20',
                      'scipy>=1.6'],
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Environment :: Console',
        'Intended Audience :: Science/Research',
        ('License :: OSI Approved :: GNU General Public License v3 or later '
         '(GPLv3+)'),
        'Natural Language :: English',
        'Operating System :: Unix',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering :: Mathematics',
        'Topic :: Scientific/Engineering :: Physics',
    ],
)
