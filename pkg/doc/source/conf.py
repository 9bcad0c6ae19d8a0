# -*- coding: utf-8 -*-
#
# bidsum documentation build configuration file
#
# This file is execfile()d with the current directory set to its containing dir.

import sys
import os

# If your extensions are in another directory, add it here. If the directory
# is relative to the documentation root, use os.path.abspath to make it
# absolute, like shown here.
sys.path.append(os.path.abspath('../../'))

# -- General configuration -----------------------------------------------------

extensions = ['sphinx.ext.autodoc']

templates_path = ['.templates']

source_suffix = '.rst'

master_doc = 'index'

project = u'bidsum'
copyright = u'2026, The bidsum developers'

# The short X.Y version.
version = '0.3'
# The full version, including alpha/beta/rc tags.
release = '0.3.0'

exclude_trees = []

pygments_style = 'sphinx'

# -- Options for HTML output ---------------------------------------------------

html_theme = 'default'
html_theme_options = {
    "stickysidebar": "true"
}

htmlhelp_basename = 'bidsumdoc'

# -- Options for LaTeX output --------------------------------------------------

latex_documents = [
    ('index', 'bidsum.tex', u'bidsum Documentation',
     u'The bidsum developers', 'manual'),
]
