from setuptools import setup, find_packages

setup(  name='coarse-kernel-toolkit',
        version='1.0.0',
        author='Sungmin Lee',
        author_email='il.sungminlee@gmail.com',
        description="Finite truncations of coarse geometry: kernels, Hilbert space embeddings, band operators and groupoid checks",
        license="BSD License",
        package_dir = {'':'src'},
        packages=find_packages(where='src'),
        python_requires=">=3.9",
        install_requires=["numpy","scipy","networkx","python-dotenv","PyYAML"],
        extras_require={"test":["pytest","hypothesis"]},
        entry_points={"console_scripts":["pycoarse=pycoarse.cli:main"]} )
