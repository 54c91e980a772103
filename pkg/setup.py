from setuptools import setup, find_packages

long_description = '''
Simulates the controlled-SWAP entanglement test on dense state vectors,
checks every closed-form outcome probability against the simulator and
writes the datasets behind the efficiency and error-robustness curves.
See the README for the command-line interface and the CSV layouts.
'''

setup(name='cswap',
      version='0.1.0',
      description='Statevector simulation and closed forms of the CSWAP '
                  'entanglement test',
      long_description=long_description,
      license='MIT',
      packages=find_packages(exclude=['examples', 'examples.*']),
      install_requires=[
          'numpy',
          'pandas>=0.24.0',
          'progressbar2>=3.46.1',
          'scipy',
      ],
      extras_require={
          'tests': ['flaky', 'hypothesis', 'pytest'],
      },
      entry_points={
          'console_scripts': ['cswap = cswap.cli:main'],
      })
