# -*- coding: utf-8 -*-
#
# dinc documentation build configuration file
import os
import sys

sys.path.insert(0, os.path.abspath('..'))
import dinc  # noqa: E402

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.mathjax',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'pydinc'
copyright = u'2026 pydinc developers'

version = dinc.__version__
release = dinc.__version__

exclude_patterns = ['_build']
add_function_parentheses = True
add_module_names = True
pygments_style = 'sphinx'

html_theme = 'default'
html_static_path = ['_static']
html_show_sourcelink = False
html_show_sphinx = False
html_show_copyright = True
htmlhelp_basename = 'dincdoc'

latex_elements = {
}
latex_documents = [
  ('index', 'dinc.tex', u'dinc Documentation',
   u'pydinc developers', 'manual'),
]

man_pages = [
    ('index', 'dinc', u'dinc Documentation',
     [u'pydinc developers'], 1)
]

texinfo_documents = [
  ('index', 'dinc', u'dinc Documentation',
   u'pydinc developers', 'dinc',
   'Multiplicity of solutions for discrete differential inclusions.',
   'Miscellaneous'),
]
