from os import path

from setuptools import find_packages, setup

here = path.abspath(path.dirname(__file__))

with open(path.join(here, 'README.rst'), encoding='utf-8') as f:
    long_description = f.read()

setup(
    name='crtrack',
    use_scm_version={'fallback_version': '0.1.0'},
    description='Low-light multi-object tracking engine and benchmark toolkit.',
    long_description=long_description,
    url='https://github.com/crtrack/crtrack',
    author='crtrack authors',
    author_email='',
    license='MIT',
    classifiers=[
        'Development Status :: 4 - Beta',
        'License :: OSI Approved :: MIT License',
        'Programming Language :: Python :: 3',
        'Programming Language :: Python :: 3.8',
        'Programming Language :: Python :: 3 :: Only',
        'Topic :: Scientific/Engineering :: Image Recognition'
    ],
    keywords='multi-object tracking, low light, semi-supervised, MOT',
    packages=find_packages('src'),
    package_dir={'': 'src'},
    install_requires=[
        'numpy==1.24.4', 'scipy==1.10.1', 'filterpy==1.4.5',
        'Pillow==10.4.0', 'colorama==0.4.6'
    ],
    extras_require={'test': ['pytest==7.4.4']},
    python_requires='>=3.8, <4',
    setup_requires=['setuptools_scm'],
    include_package_data=True,
    entry_points={
        'console_scripts': ['crtrack=crtrack.cli:main']
    }
)
