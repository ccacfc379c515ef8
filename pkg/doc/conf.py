#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# PyLBS documentation build configuration file.
#
# This file is execfile()d with the current directory set to its
# containing dir.
#
# All configuration values have a default; values that are commented out
# serve to show the default.

import sys
import os

import sphinx_rtd_theme

# The package is documented from the source tree.
sys.path.insert(0, os.path.abspath('../'))

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
    'sphinx.ext.napoleon',
    'sphinx.ext.viewcode',
]

templates_path = ['_templates']

source_suffix = ['.rst']

master_doc = 'index'

# General information about the project.
project = 'PyLBS'
copyright = u'2026, PyLBS team'
author = 'PyLBS team'

# The short X.Y version and the full version, including alpha/beta/rc tags.
import lbs
version = lbs._version.__version__
release = version

language = 'en'

exclude_patterns = ['_build']

pygments_style = 'sphinx'

todo_include_todos = False

# Napoleon settings
napoleon_use_param = False

# -- Options for HTML output ----------------------------------------------

html_theme = 'sphinx_rtd_theme'
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]

htmlhelp_basename = 'PyLBSdoc'

# -- Options for LaTeX output ---------------------------------------------

latex_elements = {
    # allow chapter to start on even pages
    'extraclassoptions': 'openany',
    # Disable "fancy" chapter formatting
    'fncychap': '',
    'preamble':
        r'''
        % additional Unicode characters:
        \DeclareUnicodeCharacter{03B2}{\ensuremath{\beta}} % β
        \DeclareUnicodeCharacter{03C3}{\ensuremath{\sigma}} % σ
        \DeclareUnicodeCharacter{2016}{\ensuremath{\|}} % ‖
        \DeclareUnicodeCharacter{2212}{\ensuremath{-}} % −
        \DeclareUnicodeCharacter{2264}{\ensuremath{\le}} % ≤
        \DeclareUnicodeCharacter{2265}{\ensuremath{\ge}} % ≥
        \DeclareUnicodeCharacter{00D7}{\ensuremath{\times}} % ×
        % allow line break after underscore
        \renewcommand\_{\textunderscore\allowbreak}
        ''',
}

latex_documents = [
    (master_doc, 'PyLBS.tex', 'PyLBS Documentation', 'PyLBS team',
     'manual'),
]

# -- Options for manual page output ---------------------------------------

man_pages = [
    (master_doc, 'pylbs', 'PyLBS Documentation', [author], 1)
]
