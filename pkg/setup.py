from setuptools import find_packages, setup

setup(
    name="framecraft",
    version="0.1.0",
    description="Frames, group representations and almost invariant vectors for finite and dyadic toy models",
    author="Tobias Hoinka",
    author_email="thoinka@gmail.com",
    keywords=["Frames", "Representation Theory", "Induced Representations", "Haar Wavelets"],
    packages=find_packages(exclude=["*.test"]),
    python_requires=">=3.8",
    install_requires=["scipy", "numpy", "pandas"],
    extras_require={"test": ["pytest", "hypothesis"]},
    entry_points={"console_scripts": ["framecraft=framecraft.cli:main"]},
    classifiers=[
        "Development Status :: 3 - Alpha",
        "Intended Audience :: Science/Research",
        "Topic :: Scientific/Engineering :: Mathematics",
        "License :: OSI Approved :: MIT License",
        "Programming Language :: Python :: 3.8",
        "Programming Language :: Python :: 3.9",
        "Programming Language :: Python :: 3.10",
    ],
)
