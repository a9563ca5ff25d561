from .ideal import cmd_ideal
from .invariant import cmd_invariant
from .table import cmd_catalog, cmd_reproduce_table

COMMANDS = {
    'invariant': cmd_invariant,
    'ideal': cmd_ideal,
    'reproduce-table': cmd_reproduce_table,
    'catalog': cmd_catalog,
}

__all__ = ['COMMANDS', 'cmd_catalog', 'cmd_ideal', 'cmd_invariant', 'cmd_reproduce_table']
