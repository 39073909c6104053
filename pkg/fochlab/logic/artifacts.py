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

""" Writing and reading experiment artifacts.

Snapshots are binary: a 32 byte little-endian header (magic, N_grid, L, t,
padding) followed by the N_grid float64 samples of u. Tables are CSV files
with floats written in repr form, so they read back exactly. Every run
ends with a manifest.json listing the artifacts and their md5 sums.

"""

import csv
import json
import logging
import math
import os
import os.path
import struct

import numpy as np

from fochlab.logic import common
from fochlab.logic.spectral import GridSpec, SpectralField

log = logging.getLogger(__name__)

SNAPSHOT_MAGIC = b'FOCH'
SNAPSHOT_HEADER = struct.Struct('<4sIdd8x')
MANIFEST = 'manifest.json'


def write_snapshot(file, u, t):
    """ Write the samples of u at time t to the path or binary file. """
    header = SNAPSHOT_HEADER.pack(SNAPSHOT_MAGIC, u.grid.points,
                                  u.grid.length, t)
    data = np.asarray(u.samples, dtype='<f8').tobytes()
    if isinstance(file, str):
        common.makedirs(file)
        with open(file, 'wb') as stream:
            stream.write(header)
            stream.write(data)
    else:
        file.write(header)
        file.write(data)


def read_snapshot(file, dealias_cut=1.0):
    """ Read a snapshot; returns (field, t).

    Raises ValueError for a truncated file or a foreign header.

    """
    if isinstance(file, str):
        with open(file, 'rb') as stream:
            content = stream.read()
    else:
        content = file.read()
    if len(content) < SNAPSHOT_HEADER.size:
        raise ValueError('Snapshot is shorter than its header')
    magic, points, length, t = SNAPSHOT_HEADER.unpack_from(content)
    if magic != SNAPSHOT_MAGIC:
        raise ValueError('Not a snapshot, magic is {!r}'.format(magic))
    expected = SNAPSHOT_HEADER.size + 8 * points
    if len(content) != expected:
        raise ValueError('Snapshot holds {} bytes, expected {} for N_grid = {}'
                         .format(len(content), expected, points))
    samples = np.frombuffer(content, dtype='<f8', offset=SNAPSHOT_HEADER.size)
    grid = GridSpec(length, points, dealias_cut)
    return SpectralField.from_samples(grid, samples.astype(float)), t


def cell(value):
    """ A CSV cell: floats in repr form, None as an empty cell. """
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def write_table(file, columns, rows):
    """ Write rows, sequences matching columns, as CSV to the path. """
    common.makedirs(file)
    with open(file, 'w', newline='') as stream:
        writer = csv.writer(stream)
        writer.writerow(columns)
        for row in rows:
            if len(row) != len(columns):
                raise ValueError('Row {} does not match the columns {}'
                                 .format(row, columns))
            writer.writerow([cell(value) for value in row])


def read_table(file):
    """ Read a CSV table back; returns (columns, rows of strings). """
    with open(file, 'r', newline='') as stream:
        reader = csv.reader(stream)
        columns = next(reader)
        return columns, list(reader)


def plain(value):
    """ Convert value to something json can write.

    numpy scalars and arrays become python values, dataclass-like objects
    with to_dict are expanded, and non-finite floats become the strings
    'inf', '-inf' and 'nan'.

    """
    if hasattr(value, 'to_dict'):
        return plain(value.to_dict())
    if isinstance(value, dict):
        return {str(key): plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [plain(item) for item in value]
    if isinstance(value, np.ndarray):
        return [plain(item) for item in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return repr(value)
        return value
    return value


def write_json(file, document):
    """ Write document to the path as indented JSON. """
    common.makedirs(file)
    with open(file, 'w') as stream:
        json.dump(plain(document), stream, indent=2, sort_keys=True)
        stream.write('\n')


class ArtifactWriter(object):

    """ Writes the artifacts of one run below a directory and remembers them
    for the manifest. """

    def __init__(self, directory):
        self.directory = directory
        self.files = list()
        os.makedirs(directory, exist_ok=True)

    def path(self, name):
        """ The full path of the artifact name. """
        return os.path.join(self.directory, name)

    def _written(self, name):
        if name not in self.files:
            self.files.append(name)
        log.debug('Wrote %s', self.path(name))
        return self.path(name)

    def snapshot(self, name, u, t):
        """ Write a snapshot artifact. """
        path = self.path(name)
        write_snapshot(path, u, t)
        return self._written(name)

    def table(self, name, columns, rows):
        """ Write a CSV artifact. """
        write_table(self.path(name), columns, rows)
        return self._written(name)

    def json(self, name, document):
        """ Write a JSON artifact. """
        write_json(self.path(name), document)
        return self._written(name)

    def manifest(self, document):
        """ Write manifest.json, last, with an md5 sum per artifact.

        Returns the path of the manifest.

        """
        document = dict(document)
        document['artifacts'] = [
            {'file': name, 'md5': common.checksum_file(self.path(name))}
            for name in self.files]
        path = self.path(MANIFEST)
        write_json(path, document)
        return path


def verify_manifest(directory):
    """ Names of the artifacts whose md5 no longer matches the manifest. """
    with open(os.path.join(directory, MANIFEST), 'r') as stream:
        document = json.load(stream)
    return [entry['file'] for entry in document['artifacts']
            if common.checksum_file(os.path.join(directory, entry['file']))
            != entry['md5']]
