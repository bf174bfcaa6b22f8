from setuptools import setup, find_packages

setup(
    name='mera_transpiler',
    version='0.1',
    packages=find_packages(where='src'),
    package_dir={'': 'src'},
    install_requires=[
        'joblib',
        'networkx',
        'numpy',
        'optuna',
        'pandas',
        'statsmodels',
    ],
    extras_require={
        'test': ['pytest'],
    },
)
