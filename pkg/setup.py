from setuptools import setup

# NOTE: This is currently duplicated from the bidsum.__init__ module, because
# that's just how you write a setup.py (nobody reads this stuff out of the
# module)

__homepage__ = "https://github.com/bidsum/bidsum"
version_info = (0, 3, 0)
__version__ = '.'.join(str(i) for i in version_info)

setup(
    name="bidsum",
    version=__version__,
    description="Bimodal video summarization toolkit",
    url=__homepage__,
    packages=('bidsum', 'bidsum.scorer', 'bidsum.test', 'bidsum.test.scorer', 'bidsum.test.performance'),
    package_data={'bidsum.test': ['fixtures/*', 'fixtures/golden/*']},
    license="BSD License",
    zip_safe=False,
    install_requires=['numpy>=1.17', 'scipy>=1.3', 'matplotlib>=3.3'],
    entry_points={'console_scripts': ['bidsum = bidsum.cli:main']},
    long_description="""bidsum builds and evaluates query-focused and generic video summaries""",
    python_requires='>=3.6',
    # See https://pypi.python.org/pypi?%3Aaction=list_classifiers
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Environment :: Console",
        "Intended Audience :: Science/Research",
        "License :: OSI Approved :: BSD License",
        "Operating System :: OS Independent",
        "Programming Language :: Python",
        "Programming Language :: Python :: 3",
        "Programming Language :: Python :: 3.7",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Topic :: Multimedia :: Video",
        "Topic :: Scientific/Engineering :: Artificial Intelligence",
    ]
)
