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

""" Command module.

This module contains the classes 'UnknownSubcommandException' and 'Command'.

Every command of fochlab subclasses Command. The class provides prefixed
output, so experiment progress reads the same everywhere, and registering and
invoking of subcommands.

"""


class UnknownSubcommandException(Exception):

    """ An exception raised by Command when a subcommand isn't registered. """

    def __init__(self, subcommand):
        """ Initialize an exception.

        This initializer requires one parameter:
            subcommand    The subcommand that was not found.

        """
        Exception.__init__(self, 'Could not find subcommand {}'
                           .format(subcommand))
        self.subcommand = subcommand


class Command(object):

    """ A common Command class.

    It provides methods to output progress nicely, and registering and
    invoking of sub commands, one per experiment.

    """

    def __init__(self, prefix=' :: ', printer=print):
        """ Initialize this command.

        Up to two parameters are accepted:
            prefix=' :: '    The prefix of main lines. Sub lines are indented
                             by as many spaces.
            printer=print    The function used to print. It must accept the
                             same parameters as python's print, most notably
                             'sep' and several strings.

        """
        self.printer = printer

        self.f_prefix = prefix
        self.e_prefix = ' ' * len(prefix)

        self.subcommands = dict()

    def p_main(self, message, *frmt):
        """ Print a main line, with the prefix before it.

        This method takes a message and optionally arguments that are passed
        to message.format().

        """
        if frmt:
            message = message.format(*frmt)
        self.p_raw(self.f_prefix, message, sep='')

    def p_sub(self, message, *frmt):
        """ Print a sub line, indented as far as the prefix reaches. """
        if frmt:
            message = message.format(*frmt)
        self.p_raw(self.e_prefix, message, sep='')

    def p_blank(self):
        """ Print a blank line. """
        self.p_raw()

    def p_raw(self, *args, **kwargs):
        """ Print directly to the printer. """
        self.printer(*args, **kwargs)

    def register_subcommand(self, name, method):
        """ Register a subcommand.

        It will be stored by the name, and it can later be invoked by doing
        'self.invoke_subcommand(name)'.

        This method accepts two parameters:
            name      The name of the subcommand.
            method    The method that contains this subcommand.
                      The method may only accept the 'self' parameter.

        """
        self.subcommands[name] = method

    def invoke_subcommand(self, name, exceptions=(), failure=None):
        """ Invoke a subcommand and return what it returns.

        The specified tuple of exceptions is caught and displayed as an
        error, without a stack trace.

        Up to three parameters are accepted:
            name            The name of the subcommand to invoke.
            exceptions=()   A tuple of exceptions to be caught.
            failure=None    What to return when one of them was caught.

        Exceptions raised:
            UnknownSubcommandException    If the subcommand wasn't
                                          registered.

        Additionally any exception may be raised by the subcommand invoked.

        """
        if name not in self.subcommands:
            raise UnknownSubcommandException(name)
        try:
            return self.subcommands[name]()
        except exceptions as err:
            self.p_sub('Error: {}'.format(str(err)))
            return failure
