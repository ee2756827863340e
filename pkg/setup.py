from setuptools import setup, find_packages
import string

# Load description
def find_long_description():
    with open('README.md', 'r') as f:
        return f.read()

# Read the version string
def find_version():
    version_var_name = '__version__'
    with open('arrivaltools/_version.py', 'r') as f:
        for l in f:
            if not l.startswith(version_var_name):
                continue
            return l[len(version_var_name):].strip(string.whitespace + '\'"=')
        raise RuntimeError('Unable to read version string.')

setup(
    name='arrivaltools',
    version=find_version(),
    description='Pedestrian arrival rate estimation from a moving vehicle.',
    long_description=find_long_description(),
    long_description_content_type="text/markdown",
    packages=find_packages(exclude=('docs',)),
    package_data={'arrivaltools.model': ['data/*.json']},
    python_requires='>=3.7',
    install_requires=[
        'numpy>=1.17.0',
        'scipy>=1.4.0',
        'matplotlib>=2.1.0',
        'networkx>=2.4',
        'pandas>=1.0.0',
        'tqdm>=4.40.0'
    ],
    entry_points={
        'console_scripts': ['arrivaltools=arrivaltools.cli:main']
    },
    zip_safe=False,
    classifiers=[
        'Development Status :: 3 - Alpha',
        'Intended Audience :: Science/Research',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python',
        'Programming Language :: Python :: 3',
        'Topic :: Scientific/Engineering',
    ]
)
