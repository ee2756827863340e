# -*- coding: utf-8 -*-
#
# Sphinx configuration for the arrivaltools API references.

import os
import sys
sys.path.insert(0, os.path.abspath('../..'))
import string

def find_version():
    version_var_name = '__version__'
    with open('../../arrivaltools/_version.py', 'r') as f:
        for l in f:
            if not l.startswith(version_var_name):
                continue
            return l[len(version_var_name):].strip(string.whitespace + '\'"=')
        raise RuntimeError('Unable to read version string.')

__version__ = find_version()

# -- Project information -----------------------------------------------------

project = 'arrivaltools'
copyright = '2026, arrivaltools developers'
author = 'arrivaltools developers'

# The short X.Y version
version = '.'.join(__version__.split('.')[:-1])
release = __version__

# -- General configuration ---------------------------------------------------

needs_sphinx = '1.3'

extensions = [
    'sphinx.ext.napoleon',
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
]

autodoc_member_order = 'bysource'
autodoc_default_options = {
    'show-inheritance': True
}

# Docstrings follow the Google style.
napoleon_numpy_docstring = False

source_suffix = '.rst'
master_doc = 'index'
exclude_patterns = []

# -- Options for HTML output -------------------------------------------------

html_theme = 'alabaster'
html_theme_options = {
    'page_width': '1020px'
}
htmlhelp_basename = 'arrivaltoolsdoc'

# -- Options for intersphinx extension ---------------------------------------

intersphinx_mapping = {
    'python': ('https://docs.python.org/3/', None),
    'numpy': ('https://numpy.org/doc/stable/', None),
    'scipy': ('https://docs.scipy.org/doc/scipy/', None),
    'pandas': ('https://pandas.pydata.org/docs/', None),
    'networkx': ('https://networkx.org/documentation/stable/', None),
    'matplotlib': ('https://matplotlib.org/stable/', None),
}
