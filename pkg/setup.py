'''
Setup of the hoflow package.
Dependencies are:
    - numpy
    - scipy
    - pandas
    - matplotlib
'''

from setuptools import setup, find_packages

setup(
    name='hoflow',
    version='0.1.0',
    packages=find_packages(exclude=['tests', 'tests.*']),
    python_requires='>=3.10',
    install_requires=[
        'numpy',
        'scipy',
        'pandas',
        'matplotlib',
    ],
    extras_require={
        'test': ['pytest', 'hypothesis'],
        'docs': ['sphinx', 'sphinx_rtd_theme'],
    },
    entry_points={
        'console_scripts': ['hoflow=hoflow.cli:main'],
    },
    # Other metadata
)
