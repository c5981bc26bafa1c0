from setuptools import setup, find_packages

setup(name='vergmlib',
      version='0.1.0',
      description='Valued exponential-family random graph models for migration flow networks',
      author='...',
      author_email='...',
      license='GPLv3',
      packages=find_packages(exclude=['tests']),
      install_requires=['numpy>=1.21', 'scipy>=1.7', 'scikit-learn>=0.24', 'pandas>=1.5', 'bottleneck',
                        'numba>=0.55', 'PyYAML>=5.1'],
      entry_points={'console_scripts': ['vergm=vergmlib.cli:main']},
      zip_safe=False)
