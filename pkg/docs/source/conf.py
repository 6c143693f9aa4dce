# Sphinx configuration for the hoflow documentation.
import os
import sys
sys.path.insert(0, os.path.abspath('../../'))

project = 'hoflow'
copyright = '2026, hoflow developers'
author = 'hoflow developers'
release = '0.1.0'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
    'sphinx.ext.mathjax',
    'sphinx_rtd_theme'
]

templates_path = ['_templates']
exclude_patterns = []

# module docstrings carry the numerical conventions; keep members in source order
autodoc_member_order = 'bysource'
autodoc_default_options = {'members': True, 'show-inheritance': True}

html_theme = 'sphinx_rtd_theme'
html_static_path = ['_static']

# hoflow docstrings use the NumPy layout only
napoleon_google_docstring = False
napoleon_numpy_docstring = True
napoleon_include_init_with_doc = True
napoleon_include_special_with_doc = False
napoleon_use_param = True
napoleon_use_rtype = True
