#!/usr/bin/env python

from configparser import ConfigParser

from setuptools import setup

config = ConfigParser()
config.read('Pipfile')
dependencies = [dep.replace("\"", "") for dep in config['packages'].keys()]

setup(
      name='dickson_mui_steenrod',
      version='0.1.0',
      description='Exact mod-p Steenrod-Milnor actions on Dickson-Mui invariants, with a closed-form verification harness',
      install_requires=dependencies,
      python_requires='>=3.10',
      packages=['algebra', 'analysis'],
      entry_points={
            'console_scripts': ['dickson-mui=analysis.cli:run'],
      },
)
