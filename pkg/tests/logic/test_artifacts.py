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

""" Tests for fochlab.logic.artifacts. """
from fochlab.logic import artifacts
from fochlab.logic.spectral import GridSpec, SpectralField
from unittest import TestCase
import io
import json
import math
import os
import shutil
import tempfile

import numpy as np


class TestSnapshot(TestCase):

    """ Test the binary snapshot format. """

    def setUp(self):
        self.folder = tempfile.mkdtemp()
        self.grid = GridSpec(40, 128)
        self.u = SpectralField.from_function(
            self.grid, lambda x: np.exp(-x ** 2) * np.cos(x))

    def tearDown(self):
        shutil.rmtree(self.folder)

    def test_header(self):
        """ Test the header layout. """
        assert artifacts.SNAPSHOT_HEADER.size == 32
        stream = io.BytesIO()
        artifacts.write_snapshot(stream, self.u, 0.25)
        content = stream.getvalue()
        assert len(content) == 32 + 8 * 128
        assert content[:4] == b'FOCH'

    def test_stream(self):
        """ Test reading back from a stream. """
        stream = io.BytesIO()
        artifacts.write_snapshot(stream, self.u, 0.25)
        stream.seek(0)
        field, t = artifacts.read_snapshot(stream)
        assert t == 0.25
        assert field.grid == self.grid
        assert np.allclose(field.samples, self.u.samples, atol=1e-14)

    def test_path(self):
        """ Test writing below a missing folder. """
        path = os.path.join(self.folder, 'snapshots', 'u.bin')
        artifacts.write_snapshot(path, self.u, 1.5)
        field, t = artifacts.read_snapshot(path, dealias_cut=0.5)
        assert t == 1.5
        assert field.grid.dealias_cut == 0.5
        assert field.grid.points == 128

    def test_corrupt(self):
        """ Test short, foreign and truncated content. """
        stream = io.BytesIO()
        artifacts.write_snapshot(stream, self.u, 0.0)
        content = stream.getvalue()
        for broken in (content[:20], b'NOPE' + content[4:], content[:-8]):
            with self.assertRaises(ValueError):
                artifacts.read_snapshot(io.BytesIO(broken))


class TestTables(TestCase):

    """ Test the CSV tables. """

    def setUp(self):
        self.folder = tempfile.mkdtemp()
        self.path = os.path.join(self.folder, 'table.csv')

    def tearDown(self):
        shutil.rmtree(self.folder)

    def test_cell(self):
        """ Test the cell formatting. """
        assert artifacts.cell(None) == ''
        assert artifacts.cell(True) == 'True'
        assert artifacts.cell(np.bool_(False)) == 'False'
        assert artifacts.cell(np.int64(3)) == '3'
        assert artifacts.cell(np.float64(1 / 3)) == repr(1 / 3)
        assert artifacts.cell(0.1) == '0.1'
        assert artifacts.cell('completed') == 'completed'

    def test_round_trip(self):
        """ Test that floats read back exactly. """
        rows = [[0.0, 1 / 3, 'completed'], [0.1, None, 'nonfinite']]
        artifacts.write_table(self.path, ['t', 'E', 'termination'], rows)
        columns, read = artifacts.read_table(self.path)
        assert columns == ['t', 'E', 'termination']
        assert float(read[0][1]) == 1 / 3
        assert read[1] == ['0.1', '', 'nonfinite']

    def test_row_length(self):
        """ Test that rows must match the columns. """
        with self.assertRaises(ValueError):
            artifacts.write_table(self.path, ['t', 'E'], [[0.0]])


class TestPlain(TestCase):

    """ Test artifacts.plain. """

    def test_values(self):
        """ Test the conversions. """
        document = {'grid': GridSpec(), 'array': np.arange(3),
                    'pair': (np.float64(0.5), np.bool_(True)),
                    'bad': [math.inf, -math.inf, math.nan], 1: None}
        converted = artifacts.plain(document)
        assert converted['grid'] == {'length': 2 * math.pi, 'points': 256,
                                     'dealias_cut': 1.0}
        assert converted['array'] == [0, 1, 2]
        assert converted['pair'] == [0.5, True]
        assert converted['bad'] == ['inf', '-inf', 'nan']
        assert converted['1'] is None
        json.dumps(converted)


class TestArtifactWriter(TestCase):

    """ Test artifacts.ArtifactWriter and the manifest. """

    def setUp(self):
        self.folder = tempfile.mkdtemp()
        self.directory = os.path.join(self.folder, 'run')
        self.writer = artifacts.ArtifactWriter(self.directory)

    def tearDown(self):
        shutil.rmtree(self.folder)

    def test_manifest(self):
        """ Test that the manifest lists every artifact once. """
        u = SpectralField.zeros(GridSpec())
        self.writer.table('a.csv', ['x'], [[1.0]])
        self.writer.json('b.json', {'value': 1})
        self.writer.snapshot('snapshots/c.bin', u, 0.0)
        self.writer.table('a.csv', ['x'], [[2.0]])
        assert self.writer.files == ['a.csv', 'b.json', 'snapshots/c.bin']

        path = self.writer.manifest({'experiment': 'simulate'})
        assert path == os.path.join(self.directory, 'manifest.json')
        with open(path) as stream:
            manifest = json.load(stream)
        assert manifest['experiment'] == 'simulate'
        assert [entry['file'] for entry in manifest['artifacts']] == \
            self.writer.files
        assert artifacts.verify_manifest(self.directory) == []

    def test_tampered(self):
        """ Test that a changed artifact is reported. """
        self.writer.json('b.json', {'value': 1})
        self.writer.json('d.json', {'value': 2})
        self.writer.manifest({})
        with open(self.writer.path('d.json'), 'a') as stream:
            stream.write(' ')
        assert artifacts.verify_manifest(self.directory) == ['d.json']
